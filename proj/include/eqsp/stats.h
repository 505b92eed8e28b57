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

#ifndef EQSP_STATS_H
#define EQSP_STATS_H

#include <span>
#include <vector>

namespace eqsp {

/// Running mean and variance (Welford).
class RunningStats {
  public:
    void add(double x);
    long long count() const {
        return n_;
    }
    double mean() const {
        return mean_;
    }
    /// Unbiased sample variance.
    double variance() const;
    double standard_error() const;

  private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// P(K > x) for the Kolmogorov distribution (limit of sqrt(n) D_n).
double kolmogorov_survival(double x);

struct KsResult {
    double statistic = 0.0;  // D_n
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against Uniform[a, b). Uses the
/// asymptotic distribution with the Stephens small-sample correction.
KsResult ks_test_uniform(std::vector<double> samples, double a, double b);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace eqsp

#endif
