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

#ifndef EQSP_RNG_H
#define EQSP_RNG_H

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace eqsp {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hash of an ordered tuple of integers; used to key independent streams.
inline std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p + 0x9e3779b97f4a7c15ULL));
    }
    return h;
}

/// Counter-based generator: output i is mix64(key + i * golden). Streams with
/// different keys are independent for practical purposes, and any stream can
/// be reconstructed from its key alone.
class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) : key_(key) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + counter_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], unbiased (rejection on the 128-bit product).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) {
            return static_cast<std::int64_t>((*this)());
        }
        std::uint64_t threshold = (0 - range) % range;
        while (true) {
            unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * range;
            if (static_cast<std::uint64_t>(m) >= threshold) {
                return lo + static_cast<std::int64_t>(m >> 64);
            }
        }
    }

    bool bernoulli(double p) {
        return uniform() < p;
    }

    /// Standard normal via Box-Muller (no cached second value, so draws are stateless).
    double normal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sd) {
        return mean + sd * normal();
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace eqsp

#endif
