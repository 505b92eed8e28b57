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

#include <bit>
#include <cmath>
#include <string>

#include "eqsp/errors.h"

namespace eqsp::oracle {

namespace {

const cplx kI{0.0, 1.0};

void check_capacity(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw CapacityError("oracle supports 1.." + std::to_string(kMaxQubits) + " qubits, got " + std::to_string(n));
    }
}

void check_unitary(const Mat2 &u) {
    cplx a = std::conj(u[0]) * u[0] + std::conj(u[2]) * u[2];
    cplx b = std::conj(u[0]) * u[1] + std::conj(u[2]) * u[3];
    cplx d = std::conj(u[1]) * u[1] + std::conj(u[3]) * u[3];
    if (std::abs(a - 1.0) > 1e-12 || std::abs(b) > 1e-12 || std::abs(d - 1.0) > 1e-12) {
        throw DomainError("evolve_product: non-unitary single-qubit operator");
    }
}

double reduce_half_turn(double a) {
    // Into (-pi/2, pi/2].
    double r = a - kPi * std::round(a / kPi);
    if (r <= -kPi / 2) {
        r += kPi;
    }
    return r;
}

}  // namespace

Mat2 identity2() {
    return {1.0, 0.0, 0.0, 1.0};
}

Mat2 pauli_x() {
    return {0.0, 1.0, 1.0, 0.0};
}

Mat2 z_rotation(double angle) {
    return {std::exp(-kI * angle), 0.0, 0.0, std::exp(kI * angle)};
}

Mat2 x_rotation(double angle) {
    double c = std::cos(angle);
    double s = std::sin(angle);
    return {c, -kI * s, -kI * s, c};
}

Mat2 signal_rotation(double phi, double vartheta) {
    double c = std::cos(phi);
    double s = std::sin(phi);
    // R(v) = [[0, e^{-iv}], [e^{iv}, 0]]
    return {c, -kI * s * std::exp(-kI * vartheta), -kI * s * std::exp(kI * vartheta), c};
}

Mat2 matmul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

DenseState DenseState::basis(int n, std::uint64_t index) {
    check_capacity(n);
    DenseState s;
    s.qubit_count = n;
    s.amplitudes.assign(std::size_t{1} << n, 0.0);
    s.amplitudes[index] = 1.0;
    return s;
}

DenseState DenseState::ghz(int n) {
    check_capacity(n);
    DenseState s;
    s.qubit_count = n;
    s.amplitudes.assign(std::size_t{1} << n, 0.0);
    s.amplitudes[0] = std::sqrt(0.5);
    s.amplitudes[(std::size_t{1} << n) - 1] = std::sqrt(0.5);
    return s;
}

double DenseState::norm_squared() const {
    double t = 0;
    for (const auto &a : amplitudes) {
        t += std::norm(a);
    }
    return t;
}

void apply_single(DenseState &state, int qubit, const Mat2 &u) {
    std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < state.amplitudes.size(); i++) {
        if (i & bit) {
            continue;
        }
        cplx a0 = state.amplitudes[i];
        cplx a1 = state.amplitudes[i | bit];
        state.amplitudes[i] = u[0] * a0 + u[1] * a1;
        state.amplitudes[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

DenseState evolve_product(const DenseState &state, const std::vector<Mat2> &unitaries) {
    if (static_cast<int>(unitaries.size()) != state.qubit_count) {
        throw DomainError("evolve_product: need one unitary per qubit");
    }
    DenseState out = state;
    for (int k = 0; k < state.qubit_count; k++) {
        check_unitary(unitaries[k]);
        apply_single(out, k, unitaries[k]);
    }
    return out;
}

void apply_x_pattern(DenseState &state, std::uint64_t pattern) {
    for (int k = 0; k < state.qubit_count; k++) {
        if (pattern >> k & 1) {
            apply_single(state, k, pauli_x());
        }
    }
}

std::vector<SubsetAmplitude> subset_decomposition(const std::vector<double> &omegas) {
    int n = static_cast<int>(omegas.size());
    check_capacity(n);
    DenseState ghz = DenseState::ghz(n);
    std::vector<SubsetAmplitude> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); mask++) {
        DenseState comp = ghz;
        for (int k = 0; k < n; k++) {
            Mat2 factor;
            if (mask >> k & 1) {
                double s = std::sin(omegas[k]);
                factor = {-kI * s, 0.0, 0.0, kI * s};  // -i sin Z
            } else {
                double c = std::cos(omegas[k]);
                factor = {c, 0.0, 0.0, c};
            }
            apply_single(comp, k, factor);
        }
        SubsetAmplitude sa;
        for (int k = 0; k < n; k++) {
            if (mask >> k & 1) {
                sa.subset.push_back(k);
            }
        }
        // The |0...0> amplitude of the component is (-i)^{|S|} alpha_S / sqrt(2).
        sa.amplitude = comp.amplitudes[0] * std::sqrt(2.0);
        sa.probability = comp.norm_squared();
        sa.component = std::move(comp);
        out.push_back(std::move(sa));
    }
    return out;
}

double parity_prob_exact(const DenseState &state) {
    // <psi| (I + X...X)/2 |psi>; X...X maps index i to its complement.
    std::size_t full = state.amplitudes.size() - 1;
    double overlap = 0;
    for (std::size_t i = 0; i < state.amplitudes.size(); i++) {
        overlap += std::real(std::conj(state.amplitudes[i]) * state.amplitudes[full ^ i]);
    }
    return 0.5 * (state.norm_squared() + overlap);
}

std::vector<SyndromeBranch> syndrome_project(const DenseState &state, const CodeShape &code) {
    int n = code.N();
    if (state.qubit_count != n) {
        throw DomainError("syndrome_project: state size does not match code");
    }
    std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::vector<SyndromeBranch> out;
    for (std::uint64_t rep = 0; rep <= full; rep++) {
        int w = std::popcount(rep);
        // Each coset {rep, ~rep} is visited once, from its lighter member.
        if (w > n - w) {
            continue;
        }
        SyndromeBranch br;
        br.representative = rep;
        br.weight = w;
        for (int i = 0; i + 1 < n; i++) {
            br.syndrome.push_back(static_cast<int>((rep >> i & 1) ^ (rep >> (i + 1) & 1)));
        }
        br.post_state.qubit_count = n;
        br.post_state.amplitudes.assign(state.amplitudes.size(), 0.0);
        br.post_state.amplitudes[rep] = state.amplitudes[rep];
        br.post_state.amplitudes[full ^ rep] = state.amplitudes[full ^ rep];
        br.probability = br.post_state.norm_squared();
        if (br.probability > 0) {
            double inv = 1.0 / std::sqrt(br.probability);
            for (auto &a : br.post_state.amplitudes) {
                a *= inv;
            }
        }
        out.push_back(std::move(br));
    }
    return out;
}

CodeSpaceRotation code_space_rotation_exact(int N, double phi) {
    check_capacity(N);
    std::vector<Mat2> us(N, x_rotation(phi));
    DenseState s = evolve_product(DenseState::basis(N, 0), us);
    cplx a = s.amplitudes[0];
    cplx b = s.amplitudes[(std::size_t{1} << N) - 1];
    CodeSpaceRotation out;
    out.projection_prob = std::norm(a) + std::norm(b);
    double na = std::norm(a);
    if (na == 0.0) {
        out.physical_angle = kPi / 2;
    } else {
        // Remove the global phase of a; the logical state is then cos|0> - i sin|1>.
        out.physical_angle = std::atan2(std::real(kI * b * std::conj(a)), na);
    }
    return out;
}

ArctanProtocolResult arctan_protocol_exact(int L, double x) {
    if (!(std::abs(x) <= 1.0)) {
        throw DomainError("arctan_protocol_exact: |x| must be <= 1");
    }
    int N = 2 * L + 1;
    CodeSpaceRotation r = code_space_rotation_exact(N, std::acos(x));
    ArctanProtocolResult out;
    out.projection_prob = r.projection_prob;
    out.physical_angle = reduce_half_turn(r.physical_angle);
    double sign = (L % 2 == 0) ? 1.0 : -1.0;
    out.logical_angle = reduce_half_turn(sign * kPi / 2 - out.physical_angle);
    return out;
}

std::map<int, LogicalRotation> syndrome_rotation_exact(int N, double phi, double vartheta) {
    if (N > 9) {
        throw CapacityError("syndrome_rotation_exact supports N <= 9");
    }
    std::vector<Mat2> us(N, signal_rotation(phi, vartheta));
    std::uint64_t full = (std::uint64_t{1} << N) - 1;
    DenseState from0 = evolve_product(DenseState::basis(N, 0), us);
    DenseState from1 = evolve_product(DenseState::basis(N, full), us);

    std::map<int, LogicalRotation> out;
    for (std::uint64_t rep = 0; rep <= full; rep++) {
        int w = std::popcount(rep);
        if (w > N - w) {
            continue;
        }
        // After X^rep the coset {rep, ~rep} lands on {|0_L>, |1_L>}.
        Mat2 u = {from0.amplitudes[rep], from1.amplitudes[rep], from0.amplitudes[full ^ rep],
                  from1.amplitudes[full ^ rep]};
        double nrm = std::sqrt(std::norm(u[0]) + std::norm(u[2]));
        for (auto &e : u) {
            e /= nrm;
        }
        auto it = out.find(w);
        if (it != out.end()) {
            double dev = 1.0 - trace_fidelity(it->second.op, u);
            it->second.coset_spread = std::max(it->second.coset_spread, std::abs(dev));
            continue;
        }
        LogicalRotation lr;
        lr.op = u;
        lr.theta = std::atan2(std::abs(u[1]), std::abs(u[0]));
        if (std::abs(u[0]) > 1e-14 && std::abs(u[3]) > 1e-14) {
            double zeta = 0.5 * std::arg(u[0] / u[3]);
            cplx ez = std::exp(kI * zeta);
            cplx g = u[0] / ez;
            lr.frame = zeta - kPi * std::floor(zeta / kPi);
            if (std::abs(u[1]) > 1e-300) {
                lr.axis = wrap_positive(-std::arg(kI * u[1] * ez / g), kTwoPi);
            }
        } else {
            lr.frame = std::nan("");
            lr.axis = std::nan("");
        }
        out[w] = lr;
    }
    return out;
}

double bitflip_parity_exact(int N, std::uint64_t flips, std::int64_t M, double theta, double phi) {
    check_capacity(N);
    std::vector<Mat2> us(N);
    for (int k = 0; k < N; k++) {
        us[k] = (flips >> k & 1) ? pauli_x() : z_rotation(static_cast<double>(M) * phi);
    }
    DenseState s = evolve_product(DenseState::ghz(N), us);
    CodeShape code{(N - 1) / 2, 1};
    for (auto &br : syndrome_project(s, code)) {
        if (br.probability < 1e-12) {
            continue;
        }
        DenseState post = br.post_state;
        apply_x_pattern(post, br.representative);
        // Logical Z on the repetition code is Z on any single qubit.
        apply_single(post, 0, z_rotation(-theta / 2));
        return parity_prob_exact(post);
    }
    throw NumericalError("bitflip_parity_exact: no syndrome branch with support");
}

double trace_fidelity(const Mat2 &a, const Mat2 &b) {
    cplx t = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2] + std::conj(a[3]) * b[3];
    return std::abs(t) / 2.0;
}

}  // namespace eqsp::oracle
