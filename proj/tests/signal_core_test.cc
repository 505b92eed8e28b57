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

#include "eqsp/signal_core.h"

#include <cmath>
#include <vector>

#include "eqsp/errors.h"
#include "gtest/gtest.h"

namespace eqsp {
namespace {

// Reference values computed with 30-digit mpmath.
TEST(PhaseAmplification, MatchesHighPrecisionValues) {
    EXPECT_NEAR(phase_amplification(3, 0.3), -0.0295914099141657770, 1e-15);
    EXPECT_NEAR(phase_amplification(5, 0.7), 0.400972187709109615, 1e-15);
    EXPECT_NEAR(phase_amplification(7, -1.0), 1.52582964139910285, 1e-15);
    EXPECT_NEAR(phase_amplification(41, 0.6), 1.74125046861646447e-7, 1e-20);
}

TEST(PhaseAmplification, DerivativeMatchesHighPrecisionValue) {
    EXPECT_NEAR(phase_amplification_derivative(5, 0.7), 3.64660607009075512, 1e-13);
}

TEST(PhaseAmplification, IsOddAndSaturates) {
    for (int N : {3, 5, 9, 41}) {
        double s = ((N - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        EXPECT_EQ(phase_amplification(N, -0.4), -phase_amplification(N, 0.4));
        EXPECT_NEAR(phase_amplification(N, 1.5), s * kPi / 2, std::pow(std::tan(1.5), -N));
    }
}

TEST(PhaseAmplification, DoesNotOverflowForLargeN) {
    EXPECT_NEAR(phase_amplification(2001, 1.2), kPi / 2, 1e-15);
    EXPECT_EQ(phase_amplification(2001, 0.2), 0.0);
    EXPECT_EQ(phase_amplification_derivative(2001, 1.2), 0.0);
}

TEST(PhaseAmplification, RejectsBadArguments) {
    EXPECT_THROW(phase_amplification(4, 0.1), DomainError);
    EXPECT_THROW(phase_amplification(3, kPi / 2), DomainError);
    EXPECT_THROW(phase_amplification(3, std::nan("")), DomainError);
}

TEST(SyndromeRotation, AngleAndAxis) {
    EXPECT_NEAR(syndrome_rotation_angle(7, 1, 0.4), 0.0135087027756087939, 1e-16);
    EXPECT_DOUBLE_EQ(syndrome_rotation_angle(7, 3, 0.4), 0.4);
    // (N - 2j) vartheta + (L - j) pi, reduced into [0, 2pi).
    EXPECT_NEAR(effective_axis(5, 0, 0.3), 1.5, 1e-15);
    EXPECT_NEAR(effective_axis(5, 1, 0.3), 0.9 + kPi, 1e-15);
    EXPECT_THROW(syndrome_rotation_angle(5, 3, 0.1), DomainError);
}

TEST(GhzParity, ClosedFormAndMarginal) {
    EXPECT_DOUBLE_EQ(ghz_parity_prob(3, 0.0, 0.0), 1.0);
    EXPECT_NEAR(ghz_parity_prob(3, kPi / 6, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(marginalized_parity_prob(5, 0.2, 0.05), 0.297063932728168812, 1e-15);
    EXPECT_NEAR(marginalized_parity_prob(5, 0.2, 0.0), ghz_parity_prob(5, 0.2, 0.0), 1e-15);
    EXPECT_THROW(marginalized_parity_prob(5, 0.2, -0.1), DomainError);
}

TEST(BitflipLikelihood, DependsOnUnflippedCount) {
    double p = bitflip_shot_likelihood(5, 1, 3, 0.2, 0.1);
    EXPECT_NEAR(p, 0.5 * (1 + std::cos(2.0 * 4 * 3 * 0.1 - 0.2)), 1e-15);
    EXPECT_THROW(bitflip_shot_likelihood(5, 6, 1, 0, 0), DomainError);
    EXPECT_THROW(bitflip_shot_likelihood(5, 0, 0, 0, 0), DomainError);
}

TEST(Decompose, MatchesHighPrecisionValues) {
    RotationDecomposition d = decompose({0.3, 0.1, 0.0});
    EXPECT_NEAR(d.beta, 0.995152712147363732, 1e-15);
    EXPECT_NEAR(d.phi, 0.300985950226337010, 1e-15);
    EXPECT_NEAR(flip_probability(d), 0.00967107950574622164, 1e-15);
    RotationDecomposition z = decompose({0.0, 0.0, 0.0});
    EXPECT_EQ(z.beta, 1.0);
    EXPECT_EQ(flip_probability(z), 0.0);
}

TEST(Decompose, PureZFieldIsUnitContrast) {
    RotationDecomposition d = decompose({0.7, 0.0, 0.0});
    EXPECT_NEAR(d.beta, 1.0, 1e-15);
    EXPECT_NEAR(d.phi, 0.7, 1e-15);
}

TEST(HeteroFlip, LeadingOrderValue) {
    HeteroFlipEstimate e = hetero_expected_flip_prob(0.3, 0.03, 0.3);
    EXPECT_NEAR(e.value, 9.51920898742253280e-4, 1e-18);
    EXPECT_FALSE(e.outside_validity);
    EXPECT_TRUE(hetero_expected_flip_prob(0.3, 0.1, 0.5).outside_validity);
}

TEST(QspActivation, AngleAndSuccess) {
    Activation a = qsp_activation(3, 0.5);
    EXPECT_NEAR(a.angle, -0.161619931850176563, 1e-15);
    EXPECT_NEAR(a.success_prob, 0.468944936294821605, 1e-15);
    // pi-periodic in phi.
    Activation b = qsp_activation(3, 0.5 + kPi);
    EXPECT_NEAR(b.angle, a.angle, 1e-12);
    EXPECT_NEAR(qsp_activation(3, kPi / 2).angle, -kPi / 2, 1e-15);
}

TEST(SubsetPhase, EmptySubsetOfEqualAngles) {
    // Empty subset: arctan((-1)^L prod cot).
    std::vector<double> om{0.4, 0.4, 0.4};
    std::vector<int> none;
    EXPECT_NEAR(subset_phase(om, none), std::atan(-std::pow(1 / std::tan(0.4), 3)), 1e-14);
    std::vector<int> bad{3};
    EXPECT_THROW(subset_phase(om, bad), DomainError);
    std::vector<double> flat{0.4, 0.0, 0.4};
    EXPECT_THROW(subset_phase(flat, none), DomainError);
}

TEST(ThreeCategory, Thresholds) {
    EXPECT_EQ(three_category(0.3, 0.2), Category::High);
    EXPECT_EQ(three_category(-0.3, 0.2), Category::Low);
    EXPECT_EQ(three_category(0.2, 0.2), Category::Middle);
    EXPECT_THROW(three_category(0.0, 1.0), DomainError);
}

TEST(KlHalf, Values) {
    EXPECT_NEAR(kl_half_vs_p(0.3), 0.0871766935723888764, 1e-16);
    EXPECT_EQ(kl_half_vs_p(0.5), 0.0);
    EXPECT_TRUE(std::isinf(kl_half_vs_p(0.0)));
}

TEST(WrapPositive, Range) {
    EXPECT_NEAR(wrap_positive(-0.5, kTwoPi), kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(wrap_positive(7.0, kTwoPi), 7.0 - kTwoPi, 1e-15);
    EXPECT_LT(wrap_positive(-1e-18, kTwoPi), kTwoPi);
}

}  // namespace
}  // namespace eqsp
