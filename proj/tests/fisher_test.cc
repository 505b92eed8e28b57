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

#include <cmath>
#include <vector>

#include "eqsp/errors.h"
#include "eqsp/rng.h"
#include "eqsp/signal_core.h"
#include "gtest/gtest.h"

namespace eqsp {
namespace {

TEST(ClassicalFi, GhzFringeHeisenbergValue) {
    for (int N : {1, 3, 9}) {
        auto f = classical_fi_binary([&](double w) { return ghz_parity_prob(N, w, 0.0); }, kPi / (8.0 * N));
        EXPECT_NEAR(f.value, 4.0 * N * N, 1e-6 * N * N);
        EXPECT_EQ(f.method, FisherMethod::finite_difference);
    }
}

TEST(ClassicalFi, AnalyticAndSingularPoints) {
    auto f = classical_fi_binary_analytic(0.25, 0.5, 0.1);
    EXPECT_NEAR(f.value, 0.25 / (0.25 * 0.75), 1e-15);
    EXPECT_THROW(classical_fi_binary([](double) { return 1.0; }, 0.0), DomainError);
}

TEST(MonteCarloFi, AgreesWithinError) {
    double p = 0.3;
    double dp = 0.8;
    auto f = monte_carlo_fi_binary(p, dp, 200000, stream_key({7}), 0.0);
    double want = dp * dp / (p * (1 - p));
    EXPECT_NEAR(f.value, want, 4 * f.stderr_value);
    EXPECT_THROW(monte_carlo_fi_binary(0.0, 1.0, 10, 1, 0.0), DomainError);
}

TEST(SqlBarrier, ExactFourN) {
    for (int N = 1; N <= 61; N += 2) {
        EXPECT_EQ(sql_barrier_total(N).value, 4.0 * N);
    }
    EXPECT_THROW(sql_barrier_total(4), DomainError);
    EXPECT_THROW(sql_barrier_total(63), DomainError);
}

TEST(PoissonBinomial, SmallCase) {
    std::vector<double> p{0.1, 0.2, 0.3};
    auto d = poisson_binomial(p);
    ASSERT_EQ(d.size(), 4u);
    EXPECT_NEAR(d[0], 0.504, 1e-15);
    EXPECT_NEAR(d[1], 0.398, 1e-15);
    EXPECT_NEAR(d[2], 0.092, 1e-15);
    EXPECT_NEAR(d[3], 0.006, 1e-15);
}

TEST(BitflipQfi, SmallCase) {
    std::vector<double> p{0.1, 0.2, 0.3};
    EXPECT_NEAR(bitflip_qfi(3, p).value, 24.88, 1e-12);
    std::vector<double> clean(5, 0.0);
    EXPECT_NEAR(bitflip_qfi(5, clean).value, 100.0, 1e-12);
    EXPECT_THROW(bitflip_qfi(4, p), DomainError);
}

TEST(CramerRao, Bound) {
    EXPECT_DOUBLE_EQ(cramer_rao_bound(4.0, 100), 1.0 / 400);
    EXPECT_TRUE(std::isinf(cramer_rao_bound(0.0, 10)));
    EXPECT_THROW(cramer_rao_bound(1.0, 0), DomainError);
}

}  // namespace
}  // namespace eqsp
