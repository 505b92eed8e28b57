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

#include "eqsp/protocols.h"

#include <cmath>
#include <random>
#include <vector>

#include "eqsp/errors.h"
#include "eqsp/rng.h"
#include "gtest/gtest.h"

namespace eqsp {
namespace {

RunConfig bitflip_config(int L, double gamma) {
    RunConfig c;
    c.protocol = Protocol::bitflip;
    c.noise.model = NoiseModel::hamiltonian;
    c.noise.gamma_mean = gamma;
    c.code = {L, 1};
    c.budget_K = 50000;
    c.eps_targets = {1e-2};
    return c;
}

TEST(RunConfig, Validation) {
    RunConfig c;
    EXPECT_THROW(c.validate(), ConfigError);  // no targets
    c.eps_targets = {1e-2, 1e-1};
    EXPECT_THROW(c.validate(), ConfigError);  // ascending
    c.eps_targets = {1e-1, 1e-2};
    EXPECT_NO_THROW(c.validate());
    c.noise.model = NoiseModel::hamiltonian;
    EXPECT_THROW(c.validate(), ConfigError);
    RunConfig b = bitflip_config(1, 0.1);
    EXPECT_NO_THROW(b.validate());
    b.code.blocks = 3;
    EXPECT_THROW(b.validate(), ConfigError);
    b.protocol = Protocol::combined;
    EXPECT_NO_THROW(b.validate());
    b.grid_bits = 40;
    EXPECT_THROW(b.validate(), ConfigError);
}

TEST(Protocol, NamesRoundTrip) {
    for (Protocol p : {Protocol::bare_ghz, Protocol::bitflip, Protocol::combined, Protocol::binary_search_ghz,
                       Protocol::binary_search_code, Protocol::sequential}) {
        EXPECT_EQ(parse_protocol(to_string(p)), p);
    }
    EXPECT_EQ(parse_protocol("bare-ghz"), Protocol::bare_ghz);
    EXPECT_FALSE(parse_protocol("nope").has_value());
    EXPECT_EQ(parse_mode("full-likelihood"), InferenceMode::full_likelihood);
}

TEST(Identifiability, PeriodsPerProtocol) {
    RunConfig bare;
    EXPECT_DOUBLE_EQ(identifiability_period(bare), kPi);
    EXPECT_DOUBLE_EQ(grid_domain(bare), kTwoPi);
    RunConfig b = bitflip_config(1, 0.0);
    EXPECT_DOUBLE_EQ(identifiability_period(b), kPi / 3);
    b.mode = InferenceMode::full_likelihood;
    EXPECT_DOUBLE_EQ(identifiability_period(b), kPi);
    RunConfig c = bitflip_config(1, 0.0);
    c.protocol = Protocol::combined;
    c.code.blocks = 3;
    EXPECT_DOUBLE_EQ(identifiability_period(c), kPi / 9);
}

TEST(GridBits, BareIsFixedCodeIsAdaptive) {
    RunConfig bare;
    bare.grid_bits = 16;
    EXPECT_EQ(grid_bits_for_target(bare, 1e-3), 16);
    RunConfig b = bitflip_config(1, 0.0);
    int coarse = grid_bits_for_target(b, 1e-1);
    int fine = grid_bits_for_target(b, 1e-3);
    EXPECT_LE(coarse, fine);
    EXPECT_LE(fine, b.grid_bits);
    EXPECT_GE(coarse, 8);
}

TEST(MaxMultiplier, FloorOfInverseEpsOverN) {
    RunConfig b = bitflip_config(1, 0.0);
    EXPECT_EQ(max_multiplier(b, 1e-2), 33);
    EXPECT_EQ(max_multiplier(b, 0.9), 1);
}

TEST(SingleTarget, DeterministicAndConverges) {
    RunConfig c = bitflip_config(1, 0.0);
    TargetResult a = run_single_target(c, 0);
    TargetResult b = run_single_target(c, 0);
    EXPECT_EQ(a.total_cost, b.total_cost);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_TRUE(a.converged);
    EXPECT_LE(a.circ_error, 1.2e-2);
    EXPECT_DOUBLE_EQ(a.acceptance_rate, 1.0);  // no noise, nothing rejected
}

TEST(SingleTarget, NoisyBitflipRejectsSome) {
    RunConfig c = bitflip_config(1, 0.1);
    TargetResult t = run_single_target(c, 0);
    EXPECT_LT(t.acceptance_rate, 1.0);
    EXPECT_GT(t.acceptance_rate, 0.5);
}

TEST(SingleTarget, LedgerLikelihoodsAreProbabilities) {
    RunConfig c = bitflip_config(1, 0.05);
    c.keep_ledger = true;
    TargetResult t = run_single_target(c, 0);
    ASSERT_FALSE(t.ledger.empty());
    EXPECT_EQ(static_cast<std::int64_t>(t.ledger.size()), t.experiments);
    for (const ShotRecord &r : t.ledger) {
        Fringe f = shot_likelihood(c, r);
        double p = f(c.omega_true);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
}

TEST(BareGhz, NoiselessConvergesAtModeratePrecision) {
    RunConfig c;
    c.eps_targets = {5e-2, 1e-2};
    RunResult r = run_bare_ghz(c);
    ASSERT_EQ(r.targets.size(), 2u);
    for (const TargetResult &t : r.targets) {
        EXPECT_TRUE(t.converged) << t.eps;
    }
    EXPECT_LE(r.targets[0].total_cost, r.targets[1].total_cost);
}

TEST(BinarySearch, ShotInflationIsExponential) {
    double w = kPi / 30;
    auto m0 = binary_search_shots(15, 0.0, 1e-3, w, 0.05);
    auto m1 = binary_search_shots(15, 0.1, 1e-3, w, 0.05);
    EXPECT_NEAR(static_cast<double>(m1) / m0, std::exp(4 * 15 * 0.01), 0.01 * std::exp(0.6));
}

TEST(BinarySearch, NoiselessSucceeds) {
    RunConfig c;
    c.protocol = Protocol::binary_search_ghz;
    c.seed = 5;
    BinarySearchResult r = run_binary_search(c, 1e-3);
    EXPECT_TRUE(r.success);
    EXPECT_GT(r.iterations, 0);
    for (std::size_t i = 1; i < r.widths.size(); i++) {
        EXPECT_LT(r.widths[i], r.widths[i - 1]);
    }
}

TEST(BinarySearch, ExplicitInterval) {
    RunConfig c;
    c.protocol = Protocol::binary_search_ghz;
    c.interval_lo = 0.28;
    c.interval_hi = 0.33;
    EXPECT_TRUE(run_binary_search(c, 1e-3).success);
    c.interval_lo = 0.2;
    c.interval_hi = 0.25;  // truth outside: search cannot succeed
    EXPECT_FALSE(run_binary_search(c, 1e-3).success);
    c.interval_hi = 0.2;
    EXPECT_THROW(run_binary_search(c, 1e-3), DomainError);
}

TEST(Sequential, SucceedsAndScales) {
    SequentialResult a = run_sequential(9, 0.3, 1e-2, 0.05, stream_key({1}));
    SequentialResult b = run_sequential(9, 0.3, 1e-3, 0.05, stream_key({1}));
    EXPECT_TRUE(a.success);
    EXPECT_TRUE(b.success);
    EXPECT_GT(b.M_total, a.M_total);
    EXPECT_GE(sequential_center_acceptance(9, 20000, stream_key({2})), 3.0 / 16.0);
}

TEST(SqlBaseline, UnbiasedAtOperatingPoint) {
    SqlBaselineResult r = run_sql_baseline(10000, 0.3, 0.0, 200, stream_key({3}));
    EXPECT_FALSE(r.degenerate);
    EXPECT_NEAR(r.mean, 0.3, 4 * std::sqrt(r.variance / 200));
}

TEST(SqlBarrierProbe, ExactAndEmpirical) {
    SqlBarrierProbe p = run_sql_barrier_probe(5, 100000, stream_key({4}));
    EXPECT_EQ(p.exact, 20.0);
    EXPECT_NEAR(p.empirical, 20.0, 5 * p.empirical_stderr);
}

TEST(RejectionFilter, RespectsWindow) {
    std::vector<EffectiveTimeRecord> recs;
    CounterRng rng(stream_key({5}));
    for (int i = 0; i < 50000; i++) {
        std::int64_t t = rng.uniform_int(1, 12);
        std::binomial_distribution<int> bd(static_cast<int>(t), 0.2);
        recs.push_back({t, bd(rng)});
    }
    RejectionOutcome out = rejection_filter(recs, 2, 0.2, 0.2, 12, stream_key({6}));
    ASSERT_FALSE(out.accepted_times.empty());
    for (std::int64_t T : out.accepted_times) {
        EXPECT_GE(T, 1);
        EXPECT_LE(T, 10);
    }
    EXPECT_EQ(out.clamped, 0);
}

}  // namespace
}  // namespace eqsp
