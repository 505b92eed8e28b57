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

#include "eqsp/verify.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "eqsp/errors.h"
#include "eqsp/fisher.h"
#include "eqsp/oracle.h"
#include "eqsp/protocols.h"
#include "eqsp/rng.h"
#include "eqsp/signal_core.h"
#include "eqsp/stats.h"
#include "eqsp/sweep.h"

namespace eqsp {

namespace {

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double sign_L(int N) {
    return ((N - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
}

// Distance between angles a and b modulo `period`.
double angle_gap(double a, double b, double period) {
    return circular_error(a, b, period);
}

// Tracks the worst deviation of one compared quantity.
struct Worst {
    std::string name;
    double tol;
    double value = 0.0;
    long long count = 0;

    void see(double err) {
        count++;
        if (!(err <= value)) {
            value = err;  // NaN sticks
        }
    }
    bool ok() const {
        return value <= tol;
    }
    std::string line() const {
        return fmt("%-28s max err %.3e over %lld draws (tol %.0e) %s", name.c_str(), value, count, tol,
                   ok() ? "ok" : "FAIL");
    }
};

// ---------------------------------------------------------------------------
// 1. Closed forms against the statevector oracle.

void oracle_equivalence(CheckResult &r) {
    const double tol = 1e-9;
    Worst subset{"subset probabilities", tol};
    Worst ratio{"subset tangent ratio", tol};
    Worst parity{"GHZ parity", tol};
    Worst rot_theta{"syndrome rotation angle", tol};
    Worst rot_axis{"syndrome rotation axis", tol};
    Worst rot_frame{"syndrome Z-frame", tol};
    Worst rot_op{"syndrome operator fidelity", tol};
    Worst act_angle{"QSP activation angle", tol};
    Worst act_prob{"QSP activation success", tol};
    Worst arc_prob{"arctan projection prob", tol};
    Worst arc_angle{"arctan logical angle", tol};
    Worst bitflip{"bit-flip shot likelihood", tol};

    for (int N : {3, 5, 7}) {
        const int L = (N - 1) / 2;
        for (int draw = 0; draw < 100; draw++) {
            CounterRng rng(stream_key({0x0AC1E, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(draw)}));

            std::vector<double> om(N);
            for (double &w : om) {
                w = 0.05 + 1.45 * rng.uniform();
            }
            auto parts = oracle::subset_decomposition(om);
            std::vector<double> prob(parts.size());
            for (std::size_t s = 0; s < parts.size(); s++) {
                double closed = 1.0;
                for (int k = 0; k < N; k++) {
                    double v = (s >> k) & 1 ? std::sin(om[k]) : std::cos(om[k]);
                    closed *= v * v;
                }
                prob[s] = parts[s].probability;
                subset.see(std::abs(parts[s].probability - closed));
            }
            std::uint64_t mask = rng.uniform_int(0, (1 << N) - 1);
            std::vector<int> idx;
            for (int k = 0; k < N; k++) {
                if ((mask >> k) & 1) {
                    idx.push_back(k);
                }
            }
            double t = std::tan(subset_phase(om, idx));
            std::uint64_t comp = ((std::uint64_t{1} << N) - 1) ^ mask;
            double want = prob[mask] / prob[comp];
            ratio.see(std::abs(t * t - want) / want);

            double w = -kPi + kTwoPi * rng.uniform();
            std::vector<oracle::Mat2> zs(N);
            double S = 0.0;
            for (int k = 0; k < N; k++) {
                double e = rng.normal(0.0, 0.1);
                S += e;
                zs[k] = oracle::z_rotation(w + e);
            }
            auto ghz = oracle::evolve_product(oracle::DenseState::ghz(N), zs);
            parity.see(std::abs(oracle::parity_prob_exact(ghz) - ghz_parity_prob(N, w, S)));

            double phi = 0.1 + 1.3 * rng.uniform();
            double vt = kTwoPi * rng.uniform();
            auto rots = oracle::syndrome_rotation_exact(N, phi, vt);
            for (int j = 0; j <= L; j++) {
                const auto &lr = rots.at(j);
                double th = syndrome_rotation_angle(N, j, phi);
                double ax = effective_axis(N, j, vt);
                if (th < 0) {
                    th = -th;
                    ax += kPi;
                }
                rot_theta.see(std::abs(lr.theta - th));
                if (std::sin(th) > 1e-3) {
                    rot_axis.see(angle_gap(lr.axis, ax, kTwoPi));
                }
                rot_frame.see(angle_gap(lr.frame, j * vt, kPi));
                // Rebuild g [cos I - i sin R(axis)] e^{i j vt Z} and compare up to global phase.
                oracle::Mat2 core = oracle::signal_rotation(th, ax);
                oracle::Mat2 frame = oracle::z_rotation(-j * vt);
                rot_op.see(1.0 - oracle::trace_fidelity(lr.op, oracle::matmul(core, frame)));
            }

            double qphi = -1.5 + 3.0 * rng.uniform();
            Activation act = qsp_activation(N, qphi);
            auto cs = oracle::code_space_rotation_exact(N, qphi);
            act_angle.see(angle_gap(act.angle, cs.physical_angle, kPi));
            act_prob.see(std::abs(act.success_prob - cs.projection_prob));

            double x = 0.02 + 0.96 * rng.uniform();
            auto arc = oracle::arctan_protocol_exact(L, x);
            double s2 = 1.0 - x * x;
            arc_prob.see(std::abs(arc.projection_prob - (std::pow(x, 2 * N) + std::pow(s2, N))));
            double closed_angle = sign_L(N) * std::atan(std::pow(x, N) / std::pow(s2, N / 2.0));
            arc_angle.see(angle_gap(arc.logical_angle, closed_angle, kPi));

            std::uint64_t flips = 0;
            int d = static_cast<int>(rng.uniform_int(0, L));
            while (std::popcount(flips) < d) {
                flips |= std::uint64_t{1} << rng.uniform_int(0, N - 1);
            }
            auto M = rng.uniform_int(1, 5);
            double theta = kTwoPi * rng.uniform();
            double bphi = -1.0 + 2.0 * rng.uniform();
            bitflip.see(std::abs(oracle::bitflip_parity_exact(N, flips, M, theta, bphi) -
                                 bitflip_shot_likelihood(N, d, M, theta, bphi)));
        }
    }
    r.pass = true;
    for (const Worst *w : {&subset, &ratio, &parity, &rot_theta, &rot_axis, &rot_frame, &rot_op, &act_angle,
                           &act_prob, &arc_prob, &arc_angle, &bitflip}) {
        r.lines.push_back(w->line());
        r.pass = r.pass && w->ok();
    }
}

// ---------------------------------------------------------------------------
// 2. Product-state barrier: total Fisher information 4N.

void sql_barrier(CheckResult &r) {
    bool exact = true;
    for (int N = 1; N <= 51; N += 2) {
        double v = sql_barrier_total(N).value;
        if (v != 4.0 * N) {
            exact = false;
            r.lines.push_back(fmt("N=%d total %.17g != %d FAIL", N, v, 4 * N));
        }
        if (N >= 3 && N <= 21) {
            r.lines.push_back(fmt("N=%2d  F_total = %.1f  (4N = %d)", N, v, 4 * N));
        }
    }
    SqlBarrierProbe p = run_sql_barrier_probe(7, 1000000, stream_key({0x5B1}));
    double rel = std::abs(p.empirical - 28.0) / 28.0;
    bool mc = rel <= 0.05;
    r.lines.push_back(fmt("Monte Carlo N=7, 1e6 shots: %.3f +- %.3f (rel dev %.4f, tol 0.05) %s", p.empirical,
                          p.empirical_stderr, rel, mc ? "ok" : "FAIL"));
    r.pass = exact && mc;
}

// ---------------------------------------------------------------------------
// 3. GHZ Fisher information at the steepest point of the marginalized fringe.

void ghz_qfi(CheckResult &r) {
    r.pass = true;
    for (int N : {3, 15, 101}) {
        for (double sigma : {0.0, 0.01, 0.05}) {
            double w = kPi / (4.0 * N);
            auto f = classical_fi_binary([&](double x) { return marginalized_parity_prob(N, x, sigma); }, w);
            double want = 4.0 * N * N * std::exp(-4.0 * N * sigma * sigma);
            double rel = std::abs(f.value - want) / want;
            bool ok = rel <= 1e-6;
            r.pass = r.pass && ok;
            r.lines.push_back(fmt("N=%3d sigma=%.2f  F=%.9g  expected %.9g  rel %.2e %s", N, sigma, f.value, want,
                                  rel, ok ? "ok" : "FAIL"));
        }
    }
}

// ---------------------------------------------------------------------------
// 4. Step-function properties of the amplification map.

void step_function(CheckResult &r) {
    int odd_fail = 0;
    int mono_fail = 0;
    int sat_fail = 0;
    int small_fail = 0;
    int deriv_fail = 0;
    double worst_small = 0.0;
    double worst_deriv = 0.0;
    for (int N = 3; N <= 41; N += 2) {
        double s = sign_L(N);
        for (int i = 1; i < 200; i++) {
            double w = -kPi / 2 + kPi * i / 200.0;
            if (phase_amplification(N, -w) != -phase_amplification(N, w)) {
                odd_fail++;
            }
            double w2 = -kPi / 2 + kPi * (i + 1) / 200.0;
            if (i + 1 < 200 && s * (phase_amplification(N, w2) - phase_amplification(N, w)) < 0) {
                mono_fail++;
            }
            if (w != 0.0 && std::abs(w) < kPi / 2 && s * phase_amplification_derivative(N, w) < 0) {
                mono_fail++;
            }
        }
        // The bound is tight at pi/3 to first order; allow rounding in pi/2 - Phi.
        for (double w : {kPi / 3, -kPi / 3}) {
            double target = s * (w > 0 ? 1.0 : -1.0) * kPi / 2;
            if (std::abs(phase_amplification(N, w) - target) > std::pow(3.0, -N / 2.0) + 1e-15) {
                sat_fail++;
            }
        }
        for (double k : {2.0, 4.0, 10.0}) {
            double w = 1.0 / (k * N);
            double lead = s * std::pow(w, N);
            double dev = std::abs(phase_amplification(N, w) - lead) / (N * N * w * w * std::pow(w, N));
            worst_small = std::max(worst_small, dev);
            if (dev > 2.0) {
                small_fail++;
            }
        }
        for (double k : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            double w = kPi / 4 + k / N;
            double h = 1e-6;
            double fd = (phase_amplification(N, w + h) - phase_amplification(N, w - h)) / (2 * h);
            double an = phase_amplification_derivative(N, w);
            double rel = std::abs(fd - an) / std::abs(an);
            worst_deriv = std::max(worst_deriv, rel);
            if (rel > 1e-6) {
                deriv_fail++;
            }
        }
    }
    r.lines.push_back(fmt("oddness violations: %d", odd_fail));
    r.lines.push_back(fmt("monotonicity sign violations: %d", mono_fail));
    r.lines.push_back(fmt("saturation beyond 3^(-N/2): %d", sat_fail));
    r.lines.push_back(fmt("small-angle: worst |Phi - (-1)^L w^N| / (N^2 w^2 |w|^N) = %.3f (bound 2), violations %d",
                          worst_small, small_fail));
    r.lines.push_back(fmt("derivative vs finite difference: worst rel %.2e (tol 1e-6), violations %d", worst_deriv,
                          deriv_fail));
    r.pass = odd_fail == 0 && mono_fail == 0 && sat_fail == 0 && small_fail == 0 && deriv_fail == 0;
}

// ---------------------------------------------------------------------------
// 5. Gaussian marginalization of the GHZ fringe against per-qubit sampling.

void marginalization(CheckResult &r) {
    r.pass = true;
    CounterRng pick(stream_key({0x3A261}));
    for (int trial = 0; trial < 20; trial++) {
        int N = 2 * static_cast<int>(pick.uniform_int(1, 7)) + 1;
        double w = 1.5 * pick.uniform();
        double sigma = 0.1 * pick.uniform();
        CounterRng rng(stream_key({0x3A262, static_cast<std::uint64_t>(trial)}));
        RunningStats st;
        for (int i = 0; i < 1000000; i++) {
            double S = 0.0;
            for (int k = 0; k < N; k++) {
                S += rng.normal(0.0, sigma);
            }
            st.add(ghz_parity_prob(N, w, S));
        }
        double closed = marginalized_parity_prob(N, w, sigma);
        double z = std::abs(st.mean() - closed) / st.standard_error();
        bool ok = z <= 3.0;
        r.pass = r.pass && ok;
        r.lines.push_back(fmt("N=%2d w=%.4f sigma=%.4f closed %.6f  MC %.6f +- %.1e  (%.2f SE) %s", N, w, sigma,
                              closed, st.mean(), st.standard_error(), z, ok ? "ok" : "FAIL"));
    }
}

// ---------------------------------------------------------------------------
// 6. Desk-scale reproduction of the scaling exponents.

struct ScalingCase {
    std::string label;
    RunConfig config;
    double alpha_lo;
    double alpha_hi;
    double accept_pct = -1;
    double accept_slack = 0;
};

std::vector<ScalingCase> scaling_cases() {
    std::vector<ScalingCase> out;
    RunConfig bare;
    bare.protocol = Protocol::bare_ghz;
    bare.noise.model = NoiseModel::depolarizing;
    bare.budget_K = 10000;
    bare.grid_bits = 16;
    out.push_back({"bare GHZ noiseless", bare, 1.00, 1.30});
    bare.noise.gamma_mean = 0.10;
    out.push_back({"bare GHZ 10%", bare, 1.70, 2.10});

    RunConfig bf;
    bf.protocol = Protocol::bitflip;
    bf.noise.model = NoiseModel::hamiltonian;
    bf.noise.gamma_mean = 0.10;
    bf.budget_K = 50000;
    bf.mode = InferenceMode::post_selection;
    bf.code = {1, 1};
    out.push_back({"bit-flip L=1 10% post-selection", bf, 0.90, 1.25, 86, 6});
    bf.code = {3, 1};
    out.push_back({"bit-flip L=3 10% post-selection", bf, 0.90, 1.20, 72, 6});

    RunConfig cb = bf;
    cb.protocol = Protocol::combined;
    cb.code = {1, 3};
    cb.noise.gamma_mean = 0.05;
    cb.noise.sigma_eps = 0.01;
    out.push_back({"combined L=1 5% sigma=0.01 post-selection", cb, 0.95, 1.30, 88.6, 3});
    return out;
}

void scaling(CheckResult &r, const VerifyOptions &opt) {
    r.pass = true;
    auto start = std::chrono::steady_clock::now();
    for (const ScalingCase &c : scaling_cases()) {
        SweepPlan plan = SweepPlan::desk(c.config);
        plan.threads = opt.threads;
        auto t0 = std::chrono::steady_clock::now();
        std::vector<SweepRow> rows = run_sweep(plan);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        auto sums = summarize(rows, FitMethod::ols);
        const ConfigSummary &s = sums.at(0);
        const Aggregate &a = s.aggregate;
        bool ok = s.failed_rows == 0 && a.seeds == static_cast<int>(plan.seed_count()) && a.mean_alpha >= c.alpha_lo &&
                  a.mean_alpha <= c.alpha_hi;
        std::string acc;
        if (c.accept_pct >= 0) {
            double pct = 100.0 * a.mean_acceptance;
            bool aok = std::abs(pct - c.accept_pct) <= c.accept_slack;
            ok = ok && aok;
            acc = fmt(", acceptance %.1f%% (target %.1f +- %.0f) %s", pct, c.accept_pct, c.accept_slack,
                      aok ? "ok" : "FAIL");
        }
        r.pass = r.pass && ok;
        r.lines.push_back(fmt("%s: alpha %.3f +- %.3f over %d seeds (band [%.2f, %.2f]), converged %.1f%%%s, %.0f s %s",
                              c.label.c_str(), a.mean_alpha, a.sem.value_or(0.0), a.seeds, c.alpha_lo, c.alpha_hi,
                              100.0 * a.mean_converged_fraction, acc.c_str(), secs, ok ? "ok" : "FAIL"));
    }
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = total <= 900.0;
    r.pass = r.pass && in_budget;
    r.lines.push_back(fmt("total runtime %.0f s (budget 900 s) %s", total, in_budget ? "ok" : "FAIL"));
}

// ---------------------------------------------------------------------------
// 7. Adaptive binary search.

void binary_search(CheckResult &r) {
    const int N = 15;
    const double eps = 1e-3;
    int wins = 0;
    for (int trial = 1; trial <= 100; trial++) {
        RunConfig c;
        c.protocol = Protocol::binary_search_ghz;
        c.seed = static_cast<std::uint64_t>(trial);
        c.probe_qubits = N;
        c.delta = 0.05;
        wins += run_binary_search(c, eps).success;
    }
    double freq = wins / 100.0;
    bool ok = freq >= 0.90;
    r.lines.push_back(fmt("noiseless N=15 delta=0.05 eps=%.0e: success %d/100 (need >= 90) %s", eps, wins,
                          ok ? "ok" : "FAIL"));
    double sigma = std::sqrt(0.5 / N);
    double width = kPi / (2.0 * N);
    double m0 = static_cast<double>(binary_search_shots(N, 0.0, eps, width, 0.05));
    double m1 = static_cast<double>(binary_search_shots(N, sigma, eps, width, 0.05));
    double want = std::exp(4.0 * N * sigma * sigma);
    double ratio = m1 / m0;
    bool inflate = std::abs(ratio / want - 1.0) <= 0.10;
    r.lines.push_back(fmt("N sigma^2 = 0.5: shots per iteration %.0f -> %.0f, ratio %.4f vs e^{4 N sigma^2} = %.4f %s",
                          m0, m1, ratio, want, inflate ? "ok" : "FAIL"));
    r.pass = ok && inflate;
}

// ---------------------------------------------------------------------------
// 8. Sequential amplification search.

void sequential(CheckResult &r) {
    const int N = 9;
    EpsGrid grid{13, 1e-3, 1e-1};
    std::vector<double> x;
    std::vector<double> y;
    bool all_ok = true;
    for (double eps : grid.points()) {
        RunningStats m;
        int wins = 0;
        for (std::uint64_t seed = 0; seed < 5; seed++) {
            SequentialResult s = run_sequential(N, 0.3, eps, 0.05, stream_key({0x5E9, seed}));
            m.add(static_cast<double>(s.M_total));
            wins += s.success;
        }
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(m.mean()));
        r.lines.push_back(fmt("eps %.3e  mean M_total %.0f  success %d/5", eps, m.mean(), wins));
        all_ok = all_ok && wins >= 4;
    }
    double slope = ols_slope(x, y);
    bool sok = std::abs(slope - 1.0) <= 0.15;
    r.lines.push_back(fmt("slope of log M_total on log(1/eps): %.3f (target 1.0 +- 0.15) %s", slope,
                          sok ? "ok" : "FAIL"));
    double acc = sequential_center_acceptance(N, 200000, stream_key({0x5EA}));
    bool aok = acc >= 3.0 / 16.0;
    r.lines.push_back(fmt("post-selection acceptance at threshold center: %.4f (need >= 0.1875) %s", acc,
                          aok ? "ok" : "FAIL"));
    r.lines.push_back(fmt("estimates within eps in at least 4 of 5 seeds at every eps: %s", all_ok ? "yes" : "no"));
    r.pass = sok && aok && all_ok;
}

// ---------------------------------------------------------------------------
// 9. Product-state baseline variance.

void sql_baseline(CheckResult &r) {
    r.pass = true;
    const int N = 10000;
    for (double sigma : {0.0, 0.05}) {
        SqlBaselineResult b = run_sql_baseline(N, 0.3, sigma, 1000, stream_key({0x5A1, sigma > 0}));
        double want = 1.0 / (4.0 * N) + sigma * sigma / N;
        double rel = std::abs(b.variance - want) / want;
        bool ok = rel <= 0.10 && !b.degenerate;
        r.pass = r.pass && ok;
        r.lines.push_back(fmt("N=%d sigma=%.2f: variance %.4e vs %.4e (rel %.3f, tol 0.10) %s", N, sigma, b.variance,
                              want, rel, ok ? "ok" : "FAIL"));
    }
}

// ---------------------------------------------------------------------------
// 10. Heterogeneous transverse noise: mean flip probability.

double flip_prob_exact(double w, double g) {
    return flip_probability(decompose({w, g, 0.0}));
}

void hetero_noise(CheckResult &r) {
    r.pass = true;
    const double w = 0.3;
    const double g = 0.03;
    // Next-order term of p(g) = g^2 s(w^2 + g^2), s(u) = sin^2(sqrt u)/u.
    auto s = [](double u) {
        double q = std::sin(std::sqrt(u));
        return q * q / u;
    };
    double u = w * w;
    double du = 1e-6;
    double s1 = (s(u + du) - s(u - du)) / (2 * du);
    for (double h : {0.0, 0.3, 0.5}) {
        CounterRng rng(stream_key({0x4E7, static_cast<std::uint64_t>(h * 10)}));
        RunningStats st;
        for (int i = 0; i < 1000000; i++) {
            st.add(flip_prob_exact(w, rng.normal(g, g * h)));
        }
        double closed = hetero_expected_flip_prob(w, g, h).value;
        double g4 = std::pow(g, 4) * (1 + 6 * h * h + 3 * std::pow(h, 4));
        double remainder = 2.0 * std::abs(s1) * g4;
        double tol = 3.0 * st.standard_error() + remainder;
        double dev = std::abs(st.mean() - closed);
        bool ok = dev <= tol;
        r.pass = r.pass && ok;
        r.lines.push_back(fmt("h=%.1f: MC %.6e +- %.1e, closed %.6e, |diff| %.2e <= 3 SE + remainder %.2e %s", h,
                              st.mean(), st.standard_error(), closed, dev, tol, ok ? "ok" : "FAIL"));
    }
    double h0 = hetero_expected_flip_prob(w, g, 0.0).value;
    double h3 = hetero_expected_flip_prob(w, g, 0.3).value;
    r.lines.push_back(fmt("ratio h=0.3 / h=0: %.4f (1 + h^2 = 1.09)", h3 / h0));
}

// ---------------------------------------------------------------------------
// 11. Rejection filter yields uniform effective times.

void rejection(CheckResult &r) {
    const double p = 0.2;
    const int d_max = 2;
    const std::int64_t t_max = 12;
    const double P_min = 0.2;
    const std::size_t want = 100000;
    std::vector<double> times;
    std::int64_t clamped = 0;
    for (std::uint64_t batch = 0; times.size() < want; batch++) {
        std::vector<EffectiveTimeRecord> recs(200000);
        for (std::size_t i = 0; i < recs.size(); i++) {
            CounterRng rng(stream_key({0x4E1, batch, i}));
            std::int64_t t = rng.uniform_int(1, t_max);
            std::binomial_distribution<int> bd(static_cast<int>(t), p);
            recs[i] = {t, bd(rng)};
        }
        RejectionOutcome out = rejection_filter(recs, d_max, P_min, p, t_max, stream_key({0x4E2, batch}));
        clamped += out.clamped;
        CounterRng jitter(stream_key({0x4E3, batch}));
        for (std::int64_t T : out.accepted_times) {
            if (times.size() < want) {
                times.push_back(static_cast<double>(T) + jitter.uniform());
            }
        }
    }
    KsResult ks = ks_test_uniform(times, 1.0, static_cast<double>(t_max - d_max + 1));
    bool ok = ks.p_value > 0.01 && clamped == 0;
    r.lines.push_back(fmt("%zu accepted effective times (jittered), KS D = %.5f, p = %.4f (need > 0.01), clamped %lld %s",
                          times.size(), ks.statistic, ks.p_value, static_cast<long long>(clamped), ok ? "ok" : "FAIL"));
    r.pass = ok;
}

// ---------------------------------------------------------------------------
// 12. Determinism of sweep output across reruns and thread counts.

void determinism(CheckResult &r) {
    RunConfig c;
    c.protocol = Protocol::bitflip;
    c.noise.model = NoiseModel::hamiltonian;
    c.noise.gamma_mean = 0.1;
    c.code = {1, 1};
    c.budget_K = 50000;
    SweepPlan plan;
    plan.base = c;
    plan.seed_first = 2;
    plan.seed_last = 4;
    plan.eps = {6, 1e-3, 1e-1};
    auto render = [&](int threads) {
        SweepPlan p = plan;
        p.threads = threads;
        std::ostringstream out;
        write_sweep_csv(out, run_sweep(p), "determinism check");
        return out.str();
    };
    std::string a = render(1);
    std::string b = render(1);
    std::string d = render(3);
    bool ok = a == b && a == d;
    r.lines.push_back(fmt("bit-flip sweep 3 seeds x 6 targets: rerun identical %s, 1 vs 3 threads identical %s (%zu bytes)",
                          a == b ? "yes" : "no", a == d ? "yes" : "no", a.size()));
    r.pass = ok;
}

}  // namespace

const std::vector<SuiteInfo> &verify_suites() {
    static const std::vector<SuiteInfo> suites = {
        {"oracle", "closed forms agree with the statevector oracle", false},
        {"sql-barrier", "product-state Fisher information totals 4N", false},
        {"ghz-qfi", "GHZ Fisher information 4N^2 exp(-4N sigma^2)", false},
        {"step-function", "amplification map property battery", false},
        {"marginalization", "Gaussian noise marginalization vs Monte Carlo", false},
        {"scaling", "desk-scale scaling exponents and acceptance", true},
        {"binary-search", "binary search success rate and shot inflation", false},
        {"sequential", "sequential search resource slope and acceptance", false},
        {"sql-baseline", "product-state estimator variance", false},
        {"hetero-noise", "heterogeneous transverse noise flip probability", false},
        {"rejection-filter", "rejection filter gives uniform effective times", false},
        {"determinism", "sweep output is byte-identical across reruns", false},
    };
    return suites;
}

CheckResult run_suite(const std::string &id, const VerifyOptions &options) {
    const SuiteInfo *info = nullptr;
    for (const SuiteInfo &s : verify_suites()) {
        if (s.id == id) {
            info = &s;
        }
    }
    if (info == nullptr) {
        throw ConfigError("unknown verify suite '" + id + "'");
    }
    CheckResult r;
    r.id = info->id;
    r.title = info->title;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (id == "oracle") {
            oracle_equivalence(r);
        } else if (id == "sql-barrier") {
            sql_barrier(r);
        } else if (id == "ghz-qfi") {
            ghz_qfi(r);
        } else if (id == "step-function") {
            step_function(r);
        } else if (id == "marginalization") {
            marginalization(r);
        } else if (id == "scaling") {
            scaling(r, options);
        } else if (id == "binary-search") {
            binary_search(r);
        } else if (id == "sequential") {
            sequential(r);
        } else if (id == "sql-baseline") {
            sql_baseline(r);
        } else if (id == "hetero-noise") {
            hetero_noise(r);
        } else if (id == "rejection-filter") {
            rejection(r);
        } else if (id == "determinism") {
            determinism(r);
        }
    } catch (const std::exception &e) {
        r.pass = false;
        r.lines.push_back(std::string("error: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Runtime bounds stated for the fast suites.
    double limit = id == "oracle" ? 60.0 : id == "sql-barrier" ? 30.0 : 0.0;
    if (limit > 0) {
        bool fast = r.seconds < limit;
        r.lines.push_back(fmt("runtime %.2f s (limit %.0f s) %s", r.seconds, limit, fast ? "ok" : "FAIL"));
        r.pass = r.pass && fast;
    }
    return r;
}

}  // namespace eqsp
