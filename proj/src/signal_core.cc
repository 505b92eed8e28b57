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
#include <limits>
#include <string>

#include "eqsp/errors.h"

namespace eqsp {

namespace {

constexpr double kExpClamp = 700.0;

void require_odd(int N, const char *what) {
    if (N < 1 || N % 2 == 0) {
        throw DomainError(std::string(what) + ": N must be odd and >= 1, got " + std::to_string(N));
    }
}

void require_open_quarter_turn(double omega, const char *what) {
    if (!(std::abs(omega) < kPi / 2)) {
        throw DomainError(std::string(what) + ": |omega| must be < pi/2");
    }
}

double parity_sign(int L) {
    return (L % 2 == 0) ? 1.0 : -1.0;
}

// arctan(s * exp(e)) for a sign s and log magnitude e.
double atan_from_log(double s, double e) {
    if (e > kExpClamp) {
        return s * (kPi / 2);
    }
    if (e < -kExpClamp) {
        return s * std::exp(e);
    }
    return s * std::atan(std::exp(e));
}

}  // namespace

double QubitHamiltonian::total_field() const {
    return std::sqrt(omega * omega + gamma * gamma + chi * chi);
}

RotationDecomposition decompose(const QubitHamiltonian &h) {
    double Omega = h.total_field();
    if (Omega == 0.0) {
        return {1.0, 0.0, 0.0};
    }
    double c = std::cos(Omega);
    double s = std::sin(Omega);
    double z = s * h.omega / Omega;
    RotationDecomposition out;
    out.beta = std::min(1.0, std::sqrt(c * c + z * z));
    double phi = std::atan2(z, c);
    // Fold into the arctan range (-pi/2, pi/2].
    if (phi > kPi / 2) {
        phi -= kPi;
    } else if (phi <= -kPi / 2) {
        phi += kPi;
    }
    out.phi = phi;
    out.upsilon = 0.5 * std::atan2(h.chi, h.gamma);
    return out;
}

double atan_of_signed_power(double t, int n, double sign) {
    if (t == 0.0) {
        return n == 0 ? sign * (kPi / 4) : 0.0;
    }
    double s = sign;
    if (t < 0 && (n % 2 != 0)) {
        s = -s;
    }
    return atan_from_log(s, n * std::log(std::abs(t)));
}

double phase_amplification(int N, double omega) {
    require_odd(N, "phase_amplification");
    require_open_quarter_turn(omega, "phase_amplification");
    int L = (N - 1) / 2;
    return atan_of_signed_power(std::tan(omega), N, parity_sign(L));
}

double phase_amplification_derivative(int N, double omega) {
    require_odd(N, "phase_amplification_derivative");
    require_open_quarter_turn(omega, "phase_amplification_derivative");
    int L = (N - 1) / 2;
    double t = std::tan(omega);
    double c = std::cos(omega);
    double sec2 = 1.0 / (c * c);
    if (t == 0.0) {
        return N == 1 ? 1.0 : 0.0;
    }
    // t^{N-1} / (1 + t^{2N}) = 1 / (|t| * 2 cosh(N ln|t|)) since N-1 is even.
    double e = N * std::log(std::abs(t));
    if (std::abs(e) > kExpClamp) {
        return 0.0;
    }
    return parity_sign(L) * N * sec2 / (std::abs(t) * 2.0 * std::cosh(e));
}

double syndrome_rotation_angle(int N, int j, double phi) {
    require_odd(N, "syndrome_rotation_angle");
    int L = (N - 1) / 2;
    if (j < 0 || j > L) {
        throw DomainError("syndrome_rotation_angle: j must be in [0, L]");
    }
    require_open_quarter_turn(phi, "syndrome_rotation_angle");
    int k = N - 2 * j;
    if (k == 1) {
        return phi;
    }
    return atan_of_signed_power(std::tan(phi), k, 1.0);
}

double wrap_positive(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0) {
        r += period;
    }
    if (r >= period) {
        r = 0.0;
    }
    return r;
}

double effective_axis(int N, int j, double vartheta) {
    require_odd(N, "effective_axis");
    int L = (N - 1) / 2;
    if (j < 0 || j > L) {
        throw DomainError("effective_axis: j must be in [0, L]");
    }
    // (L-j) pi contributes only through its parity.
    double shift = ((L - j) % 2 == 0) ? 0.0 : kPi;
    return wrap_positive((N - 2 * j) * vartheta + shift, kTwoPi);
}

double ghz_parity_prob(int N, double omega, double S) {
    double c = std::cos(N * omega + S);
    return c * c;
}

double marginalized_parity_prob(int N, double omega, double sigma_eps) {
    if (sigma_eps < 0) {
        throw DomainError("marginalized_parity_prob: sigma_eps must be >= 0");
    }
    return 0.5 * (1.0 + std::cos(2.0 * N * omega) * std::exp(-2.0 * N * sigma_eps * sigma_eps));
}

double bitflip_shot_likelihood(int N, int d, std::int64_t M, double theta, double phi) {
    if (d < 0 || d > N) {
        throw DomainError("bitflip_shot_likelihood: d must be in [0, N]");
    }
    if (M < 1) {
        throw DomainError("bitflip_shot_likelihood: M must be >= 1");
    }
    double arg = 2.0 * static_cast<double>(N - d) * static_cast<double>(M) * phi - theta;
    return 0.5 * (1.0 + std::cos(arg));
}

double flip_probability(const RotationDecomposition &d) {
    double p = 1.0 - d.beta * d.beta;
    return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

HeteroFlipEstimate hetero_expected_flip_prob(double omega, double gamma, double h) {
    HeteroFlipEstimate out;
    double sinc = omega == 0.0 ? 1.0 : std::sin(omega) / omega;
    out.value = sinc * sinc * gamma * gamma * (1.0 + h * h);
    out.outside_validity = omega == 0.0 || std::abs(gamma * (1.0 + h) / omega) > 0.3;
    return out;
}

Activation qsp_activation(int N, double phi) {
    require_odd(N, "qsp_activation");
    if (!std::isfinite(phi)) {
        throw DomainError("qsp_activation: phi must be finite");
    }
    int L = (N - 1) / 2;
    double c = std::cos(phi);
    double s = std::sin(phi);
    Activation out;
    out.success_prob = std::pow(c * c, N) + std::pow(s * s, N);
    // Phi_N is pi-periodic; at cos(phi) = 0 it sits on the asymptote.
    double r = phi - kPi * std::round(phi / kPi);
    if (std::abs(r) >= kPi / 2 || c == 0.0) {
        out.angle = parity_sign(L) * (kPi / 2);
    } else {
        out.angle = phase_amplification(N, r);
    }
    return out;
}

double subset_phase(std::span<const double> omegas, std::span<const int> subset) {
    int N = static_cast<int>(omegas.size());
    require_odd(N, "subset_phase");
    int L = (N - 1) / 2;
    std::vector<char> in_subset(N, 0);
    for (int k : subset) {
        if (k < 0 || k >= N) {
            throw DomainError("subset_phase: subset index out of range");
        }
        in_subset[k] = 1;
    }
    int size = 0;
    for (char b : in_subset) {
        size += b;
    }
    double sign = ((L + size) % 2 == 0) ? 1.0 : -1.0;
    double log_mag = 0.0;
    for (int k = 0; k < N; k++) {
        double s = std::sin(omegas[k]);
        double c = std::cos(omegas[k]);
        if (std::abs(s) < 1e-300 || std::abs(c) < 1e-300 ||
            std::abs(omegas[k] / (kPi / 2) - std::round(omegas[k] / (kPi / 2))) < 1e-15) {
            throw DomainError("subset_phase: omega at a multiple of pi/2");
        }
        double r = in_subset[k] ? s / c : c / s;
        if (r < 0) {
            sign = -sign;
        }
        log_mag += std::log(std::abs(r));
    }
    return atan_from_log(sign, log_mag);
}

Category three_category(double phi_sample, double tau) {
    if (!(tau > 0 && tau < kPi / 4)) {
        throw DomainError("three_category: tau must be in (0, pi/4)");
    }
    if (phi_sample > tau) {
        return Category::High;
    }
    if (phi_sample < -tau) {
        return Category::Low;
    }
    return Category::Middle;
}

double kl_half_vs_p(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw DomainError("kl_half_vs_p: p must be a probability");
    }
    if (p == 0.0 || p == 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -0.5 * std::log(4.0 * p * (1.0 - p));
}

}  // namespace eqsp
