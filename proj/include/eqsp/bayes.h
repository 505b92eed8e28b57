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

#ifndef EQSP_BAYES_H
#define EQSP_BAYES_H

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace eqsp {

/// Likelihood of the form 1/2 (1 + contrast cos(freq * w - offset)). Every shot
/// model in the protocols reduces to this shape, so the grid has a fast path for it.
struct Fringe {
    double freq = 0.0;
    double offset = 0.0;
    double contrast = 0.0;

    double operator()(double w) const;
};

/// Discretized phase posterior on the points j * period / 2^bits.
///
/// Weights are kept in linear scale with the maximum renormalized to 1 after
/// every update (the log weights are shifted so the maximum is 0). Cells are
/// floored at exp(kLogFloor) so no cell is ever exactly impossible.
class PosteriorGrid {
  public:
    static constexpr int kMinBits = 4;
    static constexpr int kMaxBits = 24;
    static constexpr double kLogFloor = -690.0;

    static PosteriorGrid uniform(int bits, double period);

    int bits() const {
        return bits_;
    }
    double period() const {
        return period_;
    }
    std::size_t size() const {
        return weights_.size();
    }
    double spacing() const {
        return spacing_;
    }
    double point(std::size_t j) const {
        return static_cast<double>(j) * spacing_;
    }
    const std::vector<double> &weights() const {
        return weights_;
    }
    std::vector<double> log_weights() const;

    /// Multiplies by an arbitrary likelihood evaluated at each grid point.
    void update(const std::function<double(double)> &likelihood);
    void update(const Fringe &f);

    /// Index of the largest weight; ties go to the lowest index.
    std::size_t argmax() const;
    double map_estimate() const {
        return point(argmax());
    }

  private:
    PosteriorGrid(int bits, double period);
    void renormalize(double max_value);

    int bits_;
    double period_;
    double spacing_;
    std::vector<double> weights_;
};

/// Distance between a and b on a circle of circumference `period`, in [0, period/2].
double circular_error(double a, double b, double period);

/// Strict convergence test: circular error of the MAP below 1.2 eps.
bool converged(const PosteriorGrid &grid, double omega_true, double eps, double identifiability_period);

/// Argmax of the product of the given likelihoods, computed by replaying them
/// through the same sequential update as a live run so the index agrees exactly.
double mle_finalize(std::span<const Fringe> records, int bits, double period);

}  // namespace eqsp

#endif
