// Copyright 2026 The eqsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqsp/stats.h"

#include <algorithm>
#include <cmath>

#include "eqsp/errors.h"

namespace eqsp {

void RunningStats::add(double x) {
    n_++;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

double RunningStats::variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::standard_error() const {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < 0.2) {
        return 1.0;  // the series below converges slowly here and the value is 1 - O(1e-20)
    }
    // 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)
    double sum = 0.0;
    for (int k = 1; k <= 100; k++) {
        double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_uniform(std::vector<double> samples, double a, double b) {
    if (samples.empty()) {
        throw InsufficientDataError("ks_test_uniform: no samples");
    }
    if (!(b > a)) {
        throw DomainError("ks_test_uniform: need b > a");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); i++) {
        double f = std::clamp((samples[i] - a) / (b - a), 0.0, 1.0);
        d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
    }
    double sn = std::sqrt(n);
    return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InsufficientDataError("ols_slope: need two or more paired points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0)) {
        throw InsufficientDataError("ols_slope: x values coincide");
    }
    return sxy / sxx;
}

}  // namespace eqsp
