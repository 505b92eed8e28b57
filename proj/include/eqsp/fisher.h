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

#ifndef EQSP_FISHER_H
#define EQSP_FISHER_H

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace eqsp {

enum class FisherMethod { analytic, finite_difference, monte_carlo };

struct FisherReport {
    double value = 0.0;
    FisherMethod method = FisherMethod::analytic;
    double operating_point = 0.0;
    double stderr_value = 0.0;  // Monte Carlo only
};

/// Central-difference step max(1e-6, 1e-8 |omega|).
double fd_step(double omega);

/// (p')^2 / (p (1 - p)) for a two-outcome model, p' by central difference.
FisherReport classical_fi_binary(const std::function<double(double)> &prob, double omega);

/// Same, with a caller-supplied derivative.
FisherReport classical_fi_binary_analytic(double p, double dp, double omega);

/// Mean squared score of a two-outcome model over `shots` simulated outcomes.
FisherReport monte_carlo_fi_binary(double p, double dp, std::int64_t shots, std::uint64_t key, double omega);

/// 4 sum_j C(N,j) 2^{-N} (N-2j)^2, with the moment sum in exact integers.
FisherReport sql_barrier_total(int N);

/// Distribution of the number of flips for independent per-qubit probabilities.
std::vector<double> poisson_binomial(std::span<const double> probs);

/// 4 E[(N - d)^2] with d Poisson-binomial over the per-qubit flip probabilities.
FisherReport bitflip_qfi(int N, std::span<const double> flip_probs);

/// 1 / (M F); +inf when F = 0.
double cramer_rao_bound(double F, std::int64_t M);

}  // namespace eqsp

#endif
