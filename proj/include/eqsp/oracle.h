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

// Dense statevector reference simulator for small qubit counts. Slow and
// exhaustive on purpose: it is the ground truth the closed forms are checked against.

#ifndef EQSP_ORACLE_H
#define EQSP_ORACLE_H

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "eqsp/signal_core.h"

namespace eqsp::oracle {

using cplx = std::complex<double>;

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

inline constexpr int kMaxQubits = 14;

Mat2 identity2();
Mat2 pauli_x();
Mat2 z_rotation(double angle);   // exp(-i angle Z)
Mat2 x_rotation(double angle);   // exp(-i angle X)
/// cos(phi) I - i sin(phi) (cos(vartheta) X + sin(vartheta) Y).
Mat2 signal_rotation(double phi, double vartheta);
Mat2 matmul(const Mat2 &a, const Mat2 &b);

/// Qubit k is bit k of the basis index.
struct DenseState {
    int qubit_count = 0;
    std::vector<cplx> amplitudes;

    static DenseState basis(int n, std::uint64_t index);
    static DenseState ghz(int n);

    double norm_squared() const;
};

DenseState evolve_product(const DenseState &state, const std::vector<Mat2> &unitaries);
void apply_single(DenseState &state, int qubit, const Mat2 &u);

struct SubsetAmplitude {
    std::vector<int> subset;
    cplx amplitude;       // (-i)^{|S|} alpha_S
    double probability = 0.0;
    DenseState component;  // unnormalized component of U|GHZ>
};

/// Expands exp(-i sum omega_k Z_k)|GHZ> into its 2^N subset components by
/// applying the per-qubit factors (cos I) or (-i sin Z) explicitly.
std::vector<SubsetAmplitude> subset_decomposition(const std::vector<double> &omegas);

/// Probability of +1 for the product of X over all qubits.
double parity_prob_exact(const DenseState &state);

struct SyndromeBranch {
    std::vector<int> syndrome;        // Z_i Z_{i+1} outcomes as 0/1, i = 0..N-2
    std::uint64_t representative = 0;  // minimum-weight error pattern
    int weight = 0;                   // decoded weight j <= L
    double probability = 0.0;
    DenseState post_state;            // renormalized projection
};

/// Enumerates all syndrome outcomes of the repetition code on `state`.
std::vector<SyndromeBranch> syndrome_project(const DenseState &state, const CodeShape &code);

/// Applies X on every qubit set in `pattern`.
void apply_x_pattern(DenseState &state, std::uint64_t pattern);

struct CodeSpaceRotation {
    double projection_prob = 0.0;
    double physical_angle = 0.0;  // logical state cos(a)|0_L> - i sin(a)|1_L>, a mod pi
};

/// Applies exp(-i phi X) to every qubit of |0_L> and projects onto the code space.
CodeSpaceRotation code_space_rotation_exact(int N, double phi);

struct ArctanProtocolResult {
    double projection_prob = 0.0;
    double physical_angle = 0.0;  // in (-pi/2, pi/2]
    double logical_angle = 0.0;   // (-1)^L pi/2 - physical, reduced into (-pi/2, pi/2]
};

ArctanProtocolResult arctan_protocol_exact(int L, double x);

struct LogicalRotation {
    Mat2 op;                  // normalized logical operator for one coset
    double theta = 0.0;       // in [0, pi/2]
    double axis = 0.0;        // in [0, 2pi)
    double frame = 0.0;       // Z-frame angle zeta, mod pi
    double coset_spread = 0.0;  // max operator distance between cosets of equal weight
};

/// For each decoded weight j <= L, the corrected logical operator factored as
/// g [cos(theta) I - i sin(theta) R(axis)] exp(i frame Z).
std::map<int, LogicalRotation> syndrome_rotation_exact(int N, double phi, double vartheta);

/// X-parity +1 probability of an encoded GHZ after: phase exp(-i M phi Z) on
/// unflipped qubits, X on qubits in `flips`, minimum-weight correction, and a
/// logical exp(+i theta/2 Z).
double bitflip_parity_exact(int N, std::uint64_t flips, std::int64_t M, double theta, double phi);

/// |tr(A^dagger B)| / 2 for unitaries; 1 means equal up to global phase.
double trace_fidelity(const Mat2 &a, const Mat2 &b);

}  // namespace eqsp::oracle

#endif
