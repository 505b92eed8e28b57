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

#include "eqsp/fisher.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqsp/errors.h"
#include "eqsp/rng.h"

namespace eqsp {

double fd_step(double omega) {
    return std::max(1e-6, 1e-8 * std::abs(omega));
}

FisherReport classical_fi_binary_analytic(double p, double dp, double omega) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("classical_fi_binary: probability at a singular point (0 or 1)");
    }
    return {dp * dp / (p * (1.0 - p)), FisherMethod::analytic, omega, 0.0};
}

FisherReport classical_fi_binary(const std::function<double(double)> &prob, double omega) {
    double h = fd_step(omega);
    double p = prob(omega);
    double dp = (prob(omega + h) - prob(omega - h)) / (2.0 * h);
    FisherReport r = classical_fi_binary_analytic(p, dp, omega);
    r.method = FisherMethod::finite_difference;
    return r;
}

FisherReport monte_carlo_fi_binary(double p, double dp, std::int64_t shots, std::uint64_t key, double omega) {
    if (!(p > 0.0 && p < 1.0) || shots < 2) {
        throw DomainError("monte_carlo_fi_binary: need p in (0, 1) and at least two shots");
    }
    CounterRng rng(key);
    double s_plus = dp / p;
    double s_minus = -dp / (1.0 - p);
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::int64_t i = 0; i < shots; i++) {
        double s = rng.bernoulli(p) ? s_plus : s_minus;
        sum += s * s;
        sum2 += s * s * s * s;
    }
    double n = static_cast<double>(shots);
    double mean = sum / n;
    double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, FisherMethod::monte_carlo, omega, std::sqrt(var / n)};
}

FisherReport sql_barrier_total(int N) {
    if (N < 1 || N % 2 == 0) {
        throw DomainError("sql_barrier_total: N must be odd");
    }
    if (N > 61) {
        throw DomainError("sql_barrier_total: exact integer sum limited to N <= 61");
    }
    unsigned __int128 binom = 1;
    unsigned __int128 total = 0;
    for (int j = 0; j <= N; j++) {
        long long k = N - 2 * j;
        total += binom * static_cast<unsigned __int128>(k * k);
        binom = binom * static_cast<unsigned>(N - j) / static_cast<unsigned>(j + 1);
    }
    // total = N 2^N, so the ratio below is exact in double for N <= 61.
    double value = 4.0 * std::ldexp(static_cast<double>(total), -N);
    return {value, FisherMethod::analytic, 0.7853981633974483, 0.0};
}

std::vector<double> poisson_binomial(std::span<const double> probs) {
    std::vector<double> dist(probs.size() + 1, 0.0);
    dist[0] = 1.0;
    for (std::size_t k = 0; k < probs.size(); k++) {
        double p = probs[k];
        for (std::size_t d = k + 1; d > 0; d--) {
            dist[d] = dist[d] * (1.0 - p) + dist[d - 1] * p;
        }
        dist[0] *= 1.0 - p;
    }
    return dist;
}

FisherReport bitflip_qfi(int N, std::span<const double> flip_probs) {
    if (static_cast<int>(flip_probs.size()) != N) {
        throw DomainError("bitflip_qfi: need one flip probability per qubit");
    }
    for (double p : flip_probs) {
        if (!(p >= 0.0 && p < 1.0)) {
            throw DomainError("bitflip_qfi: flip probabilities must lie in [0, 1)");
        }
    }
    std::vector<double> dist = poisson_binomial(flip_probs);
    double m2 = 0.0;
    for (int d = 0; d <= N; d++) {
        double k = N - d;
        m2 += dist[d] * k * k;
    }
    return {4.0 * m2, FisherMethod::analytic, 0.0, 0.0};
}

double cramer_rao_bound(double F, std::int64_t M) {
    if (M < 1) {
        throw DomainError("cramer_rao_bound: M must be >= 1");
    }
    if (F <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / (static_cast<double>(M) * F);
}

}  // namespace eqsp
