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

#include <cmath>
#include <vector>

#include "eqsp/errors.h"
#include "eqsp/rng.h"
#include "gtest/gtest.h"

namespace eqsp {
namespace {

// Survival function values from scipy.stats.kstwobign.
TEST(Kolmogorov, SurvivalMatchesReference) {
    EXPECT_NEAR(kolmogorov_survival(0.5), 0.96394524366487510, 1e-8);
    EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(1.36), 0.049485876755377876, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(1.63), 0.009846364888486529, 1e-12);
    EXPECT_NEAR(kolmogorov_survival(2.5), 7.453306344157342e-06, 1e-14);
    EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(KsTest, AcceptsUniformRejectsSkewed) {
    CounterRng rng(stream_key({11}));
    std::vector<double> u(20000);
    std::vector<double> skew(20000);
    for (std::size_t i = 0; i < u.size(); i++) {
        u[i] = 2.0 + 3.0 * rng.uniform();
        double v = rng.uniform();
        skew[i] = 2.0 + 3.0 * v * v;
    }
    EXPECT_GT(ks_test_uniform(u, 2.0, 5.0).p_value, 0.01);
    EXPECT_LT(ks_test_uniform(skew, 2.0, 5.0).p_value, 1e-6);
    EXPECT_THROW(ks_test_uniform({}, 0.0, 1.0), InsufficientDataError);
    EXPECT_THROW(ks_test_uniform({0.5}, 1.0, 1.0), DomainError);
}

TEST(RunningStats, Welford) {
    RunningStats s;
    for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) {
        s.add(x);
    }
    EXPECT_EQ(s.count(), 8);
    EXPECT_DOUBLE_EQ(s.mean(), 5.0);
    EXPECT_NEAR(s.variance(), 32.0 / 7.0, 1e-14);
    EXPECT_NEAR(s.standard_error(), std::sqrt(32.0 / 7.0 / 8.0), 1e-14);
}

TEST(OlsSlope, ExactLine) {
    std::vector<double> x{1, 2, 3, 4};
    std::vector<double> y{3, 5, 7, 9};
    EXPECT_NEAR(ols_slope(x, y), 2.0, 1e-14);
    std::vector<double> same{1, 1};
    std::vector<double> y2{0, 1};
    EXPECT_THROW(ols_slope(same, y2), InsufficientDataError);
}

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
    CounterRng a(stream_key({1, 2}));
    CounterRng b(stream_key({1, 2}));
    CounterRng c(stream_key({2, 1}));
    for (int i = 0; i < 10; i++) {
        auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
    }
}

TEST(CounterRng, UniformIntInRange) {
    CounterRng r(3);
    for (int i = 0; i < 1000; i++) {
        auto v = r.uniform_int(-2, 4);
        EXPECT_GE(v, -2);
        EXPECT_LE(v, 4);
    }
}

}  // namespace
}  // namespace eqsp
