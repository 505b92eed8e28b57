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

#include "eqsp/oracle.h"

#include <cmath>

#include "eqsp/errors.h"
#include "eqsp/signal_core.h"
#include "gtest/gtest.h"

namespace eqsp::oracle {
namespace {

TEST(DenseState, GhzAmplitudes) {
    DenseState g = DenseState::ghz(3);
    ASSERT_EQ(g.amplitudes.size(), 8u);
    EXPECT_NEAR(std::abs(g.amplitudes[0]), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(std::abs(g.amplitudes[7]), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(g.norm_squared(), 1.0, 1e-15);
    EXPECT_NEAR(parity_prob_exact(g), 1.0, 1e-15);
}

TEST(DenseState, CapacityLimit) {
    EXPECT_THROW(DenseState::ghz(kMaxQubits + 1), CapacityError);
    EXPECT_THROW(DenseState::ghz(0), CapacityError);
}

TEST(EvolveProduct, RejectsNonUnitaryAndWrongCount) {
    DenseState g = DenseState::ghz(2);
    Mat2 twice = identity2();
    twice[0] = 2.0;
    EXPECT_THROW(evolve_product(g, {twice, identity2()}), DomainError);
    EXPECT_THROW(evolve_product(g, {identity2()}), DomainError);
}

TEST(EvolveProduct, PhaseOnGhzFlipsParity) {
    // exp(-i w Z) on each of N qubits gives parity probability cos^2(N w).
    DenseState g = DenseState::ghz(5);
    DenseState e = evolve_product(g, std::vector<Mat2>(5, z_rotation(0.1)));
    EXPECT_NEAR(parity_prob_exact(e), std::pow(std::cos(0.5), 2), 1e-14);
}

TEST(SubsetDecomposition, ProbabilitiesSumToOne) {
    auto parts = subset_decomposition({0.2, 0.5, 1.1});
    ASSERT_EQ(parts.size(), 8u);
    double total = 0.0;
    for (const auto &p : parts) {
        total += p.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(SyndromeProject, BranchesSumToOne) {
    DenseState s = DenseState::basis(3, 0);
    s = evolve_product(s, std::vector<Mat2>(3, x_rotation(0.3)));
    auto branches = syndrome_project(s, CodeShape{1, 1});
    double total = 0.0;
    for (const auto &b : branches) {
        total += b.probability;
        EXPECT_LE(b.weight, 1);
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_THROW(syndrome_project(DenseState::ghz(4), CodeShape{1, 1}), DomainError);
}

TEST(CodeSpaceRotation, MatchesClosedForm) {
    CodeSpaceRotation r = code_space_rotation_exact(3, 0.5);
    EXPECT_NEAR(r.projection_prob, std::pow(std::cos(0.5), 6) + std::pow(std::sin(0.5), 6), 1e-14);
}

TEST(ArctanProtocol, EndpointsAndDomain) {
    ArctanProtocolResult r = arctan_protocol_exact(1, 0.5);
    EXPECT_NEAR(r.projection_prob, std::pow(0.5, 6) + std::pow(0.75, 3), 1e-14);
    EXPECT_THROW(arctan_protocol_exact(1, 1.5), DomainError);
}

TEST(SyndromeRotationExact, CapacityAndCosetSpread) {
    EXPECT_THROW(syndrome_rotation_exact(11, 0.3, 0.1), CapacityError);
    auto rots = syndrome_rotation_exact(5, 0.3, 0.7);
    ASSERT_EQ(rots.size(), 3u);
    for (const auto &[j, r] : rots) {
        EXPECT_LT(r.coset_spread, 1e-12) << "weight " << j;
    }
}

TEST(TraceFidelity, GlobalPhaseInvariant) {
    Mat2 a = signal_rotation(0.3, 0.2);
    Mat2 b = a;
    for (auto &x : b) {
        x *= std::polar(1.0, 0.7);
    }
    EXPECT_NEAR(trace_fidelity(a, b), 1.0, 1e-15);
    EXPECT_LT(trace_fidelity(a, identity2()), 1.0);
}

TEST(BitflipParityExact, NoFlipsIsGhzFringe) {
    // With no flips the parity probability is 1/2 (1 + cos(2 N M phi - theta)).
    double p = bitflip_parity_exact(3, 0, 2, 0.4, 0.1);
    EXPECT_NEAR(p, 0.5 * (1 + std::cos(2.0 * 3 * 2 * 0.1 - 0.4)), 1e-14);
}

}  // namespace
}  // namespace eqsp::oracle
