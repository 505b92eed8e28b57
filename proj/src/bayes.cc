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

#include "eqsp/bayes.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eqsp/errors.h"
#include "eqsp/signal_core.h"

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace eqsp {

namespace {

constexpr std::size_t kBlock = 64;

// Flushes subnormal intermediates to zero for the lifetime of the guard. Cells
// that underflow are then caught by the floor instead of running slow microcode.
class FlushDenormals {
  public:
    FlushDenormals() {
#if defined(__SSE__)
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | 0x8040);
#endif
    }
    ~FlushDenormals() {
#if defined(__SSE__)
        _mm_setcsr(saved_);
#endif
    }
    FlushDenormals(const FlushDenormals &) = delete;
    FlushDenormals &operator=(const FlushDenormals &) = delete;

  private:
    unsigned saved_ = 0;
};

}  // namespace

double Fringe::operator()(double w) const {
    return 0.5 * (1.0 + contrast * std::cos(freq * w - offset));
}

PosteriorGrid::PosteriorGrid(int bits, double period)
    : bits_(bits), period_(period), spacing_(period / static_cast<double>(std::size_t{1} << bits)) {
    weights_.assign(std::size_t{1} << bits, 1.0);
}

PosteriorGrid PosteriorGrid::uniform(int bits, double period) {
    if (bits < kMinBits || bits > kMaxBits) {
        std::ostringstream msg;
        msg << "grid bits must be in [" << kMinBits << ", " << kMaxBits << "], got " << bits;
        throw ConfigError(msg.str());
    }
    if (!(period > 0) || !std::isfinite(period)) {
        throw ConfigError("grid period must be positive and finite");
    }
    return PosteriorGrid(bits, period);
}

std::vector<double> PosteriorGrid::log_weights() const {
    std::vector<double> out(weights_.size());
    for (std::size_t j = 0; j < weights_.size(); j++) {
        out[j] = std::log(weights_[j]);
    }
    return out;
}

void PosteriorGrid::renormalize(double max_value) {
    if (!(max_value > 0) || !std::isfinite(max_value)) {
        std::ostringstream msg;
        msg << "posterior degenerate after update (max weight " << max_value << ", " << weights_.size()
            << " cells, period " << period_ << "); the likelihood vanished on every grid point";
        throw NumericalError(msg.str());
    }
    const double inv = 1.0 / max_value;
    const double floor = std::exp(kLogFloor);
    for (double &w : weights_) {
        w = std::max(w * inv, floor);
    }
}

void PosteriorGrid::update(const std::function<double(double)> &likelihood) {
    FlushDenormals guard;
    double mx = 0.0;
    for (std::size_t j = 0; j < weights_.size(); j++) {
        double l = likelihood(point(j));
        if (!(l >= 0.0) || l > 1.0 + 1e-12) {
            throw NumericalError("likelihood outside [0, 1] at grid point " + std::to_string(j));
        }
        weights_[j] *= l;
        mx = std::max(mx, weights_[j]);
    }
    renormalize(mx);
}

void PosteriorGrid::update(const Fringe &f) {
    FlushDenormals guard;
    const std::size_t n = weights_.size();
    const std::size_t block = std::min(kBlock, n);
    const double step = f.freq * spacing_;
    // cos(step*(b + k) - offset) = Re(start_b * e^{i step k}).
    double tc[kBlock];
    double ts[kBlock];
    for (std::size_t k = 0; k < block; k++) {
        tc[k] = std::cos(step * static_cast<double>(k));
        ts[k] = std::sin(step * static_cast<double>(k));
    }
    const double half = 0.5;
    const double half_c = 0.5 * f.contrast;
    double *w = weights_.data();
    double mx = 0.0;
    for (std::size_t b = 0; b < n; b += block) {
        double a = f.freq * point(b) - f.offset;
        double sc = std::cos(a);
        double ss = std::sin(a);
        double *wb = w + b;
        double bmx = 0.0;
        for (std::size_t k = 0; k < block; k++) {
            double c = sc * tc[k] - ss * ts[k];
            double v = wb[k] * (half + half_c * c);
            wb[k] = v;
            bmx = v > bmx ? v : bmx;
        }
        mx = std::max(mx, bmx);
    }
    renormalize(mx);
}

std::size_t PosteriorGrid::argmax() const {
    return static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
}

double circular_error(double a, double b, double period) {
    if (!(period > 0)) {
        throw DomainError("circular_error: period must be positive");
    }
    double r = wrap_positive(a - b, period);
    return std::min(r, period - r);
}

bool converged(const PosteriorGrid &grid, double omega_true, double eps, double identifiability_period) {
    if (!(eps > 0)) {
        throw DomainError("converged: eps must be positive");
    }
    return circular_error(grid.map_estimate(), omega_true, identifiability_period) < 1.2 * eps;
}

double mle_finalize(std::span<const Fringe> records, int bits, double period) {
    if (records.empty()) {
        throw InsufficientDataError("mle_finalize: no records");
    }
    PosteriorGrid g = PosteriorGrid::uniform(bits, period);
    for (const Fringe &f : records) {
        g.update(f);
    }
    return g.map_estimate();
}

}  // namespace eqsp
