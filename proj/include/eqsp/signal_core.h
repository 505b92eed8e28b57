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

#ifndef EQSP_SIGNAL_CORE_H
#define EQSP_SIGNAL_CORE_H

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace eqsp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Per-qubit field H = omega Z + gamma X + chi Y (unit evolution time).
struct QubitHamiltonian {
    double omega = 0.0;
    double gamma = 0.0;
    double chi = 0.0;

    double total_field() const;
};

/// U = beta exp(-i Z phi) + sqrt(1 - beta^2) (error term with axis angle 2*upsilon).
struct RotationDecomposition {
    double beta = 1.0;
    double phi = 0.0;
    double upsilon = 0.0;
};

/// Repetition code [N = 2L+1, 1, N], possibly several blocks.
struct CodeShape {
    int L = 1;
    int blocks = 1;

    int N() const {
        return 2 * L + 1;
    }
    int total_qubits() const {
        return blocks * N();
    }
};

enum class NoiseModel { depolarizing, hamiltonian };

struct NoiseSpec {
    double sigma_eps = 0.0;
    double gamma_mean = 0.0;
    double heterogeneity_h = 0.0;
    NoiseModel model = NoiseModel::depolarizing;
};

RotationDecomposition decompose(const QubitHamiltonian &h);

/// arctan(sign * t^n) with t^n formed as exp(n ln|t|) so large n cannot overflow.
double atan_of_signed_power(double t, int n, double sign);

/// Phi_N(omega) = arctan((-1)^L tan^N omega), N = 2L+1.
double phase_amplification(int N, double omega);
double phase_amplification_derivative(int N, double omega);

/// Theta_j = arctan(tan^{N-2j} phi).
double syndrome_rotation_angle(int N, int j, double phi);

/// (N-2j) vartheta + (L-j) pi reduced into [0, 2pi).
double effective_axis(int N, int j, double vartheta);

/// cos^2(N omega + S).
double ghz_parity_prob(int N, double omega, double S);

/// 1/2 (1 + cos(2 N omega) exp(-2 N sigma^2)).
double marginalized_parity_prob(int N, double omega, double sigma_eps);

/// Probability of the +1 parity outcome given d detected flips:
/// cos^2((N-d) M phi - theta/2) = 1/2 (1 + cos(2 (N-d) M phi - theta)).
/// theta enters halved so that the doubled-phase fringe is the single convention.
double bitflip_shot_likelihood(int N, int d, std::int64_t M, double theta, double phi);

/// p = 1 - beta^2.
double flip_probability(const RotationDecomposition &d);

struct HeteroFlipEstimate {
    double value = 0.0;
    bool outside_validity = false;  // gamma (1+h) / omega > 0.3
};

/// Leading-order E[p_k] for gamma_k ~ Normal(gamma, (gamma h)^2).
HeteroFlipEstimate hetero_expected_flip_prob(double omega, double gamma, double h);

struct Activation {
    double angle = 0.0;
    double success_prob = 1.0;
};

/// Logical angle and code-space projection probability after N bit-flip rotations by phi.
Activation qsp_activation(int N, double phi);

/// arctan((-1)^{L+|S|} prod_{S} tan omega_k prod_{not S} cot omega_k); subset given as indices.
double subset_phase(std::span<const double> omegas, std::span<const int> subset);

enum class Category { Low, Middle, High };

Category three_category(double phi_sample, double tau);

/// -1/2 ln(4 p (1-p)); +inf at p in {0, 1}.
double kl_half_vs_p(double p);

/// Reduce x into [0, period).
double wrap_positive(double x, double period);

}  // namespace eqsp

#endif
