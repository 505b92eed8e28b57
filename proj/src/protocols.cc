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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "eqsp/errors.h"
#include "eqsp/fisher.h"
#include "eqsp/rng.h"

namespace eqsp {

namespace {

constexpr std::int64_t kMinProbe = 10;
constexpr std::int64_t kMaxProbe = 16384;
constexpr std::int64_t kBareCheckEvery = 100;
constexpr std::int64_t kAcceptedCheckEvery = 100;
constexpr std::int64_t kFullLikelihoodCheckEvery = 10;

// Salts separating the device-level streams from per-experiment streams.
constexpr std::uint64_t kDeviceSalt = 0xD371CEULL;
constexpr std::uint64_t kIntervalSalt = 0x1A7E4AULL;

std::int64_t probe_size(double eps) {
    auto n = static_cast<std::int64_t>(std::floor(1.0 / eps));
    return std::clamp(n, kMinProbe, kMaxProbe);
}

struct Device {
    std::vector<double> gamma;  // per-qubit transverse field or depolarizing rate
    std::vector<double> eps;    // per-qubit longitudinal offset
};

// One device realization per seed, shared by every eps target.
Device draw_device(const RunConfig &c, int qubits) {
    CounterRng rng(stream_key({c.seed, kDeviceSalt}));
    Device dev;
    dev.gamma.resize(qubits);
    dev.eps.resize(qubits);
    const NoiseSpec &ns = c.noise;
    for (int k = 0; k < qubits; k++) {
        double g = rng.normal(ns.gamma_mean, ns.gamma_mean * ns.heterogeneity_h);
        if (ns.model == NoiseModel::depolarizing) {
            g = std::clamp(g, 0.0, 0.99);
        } else {
            g = std::max(g, 0.0);
        }
        dev.gamma[k] = g;
    }
    for (int k = 0; k < qubits; k++) {
        dev.eps[k] = rng.normal(0.0, ns.sigma_eps);
    }
    return dev;
}

struct Tracker {
    TargetResult res;
    bool keep;

    void record(const ShotRecord &r) {
        res.total_cost += r.cost;
        res.experiments++;
        if (r.accepted) {
            res.accepted++;
        }
        if (keep) {
            res.ledger.push_back(r);
        }
    }

    void finish(const PosteriorGrid &g, double omega) {
        res.estimate = g.map_estimate();
        res.circ_error = circular_error(res.estimate, omega, res.identifiability_period);
        res.converged = res.circ_error < 1.2 * res.eps;
        res.acceptance_rate =
            res.experiments > 0 ? static_cast<double>(res.accepted) / static_cast<double>(res.experiments) : 0.0;
    }
};

TargetResult run_bare_target(const RunConfig &c, std::size_t e) {
    const double eps = c.eps_targets[e];
    const std::int64_t N = probe_size(eps);
    Device dev = draw_device(c, static_cast<int>(N));
    std::vector<double> v_true(N + 1, 1.0);
    std::vector<double> v_model(N + 1, 1.0);
    double nominal = 1.0 - std::clamp(c.noise.gamma_mean, 0.0, 0.99);
    for (std::int64_t n = 1; n <= N; n++) {
        v_true[n] = v_true[n - 1] * (1.0 - dev.gamma[n - 1]);
        v_model[n] = v_model[n - 1] * nominal;
    }

    Tracker t{{}, c.keep_ledger};
    t.res.eps = eps;
    t.res.identifiability_period = identifiability_period(c);
    t.res.grid_bits = grid_bits_for_target(c, eps);
    PosteriorGrid grid = PosteriorGrid::uniform(t.res.grid_bits, grid_domain(c));

    for (std::int64_t i = 0; i < c.budget_K; i++) {
        CounterRng rng(stream_key({c.seed, e, static_cast<std::uint64_t>(i)}));
        std::int64_t n = rng.uniform_int(1, N);
        double arg = 2.0 * static_cast<double>(n) * c.omega_true;
        double p_plus = 0.5 * (1.0 + v_true[n] * std::cos(arg));
        int outcome = rng.bernoulli(p_plus) ? 1 : -1;
        ShotRecord r;
        r.index = i;
        r.multiplier = n;
        r.outcome = outcome;
        r.cost = n;
        t.record(r);
        grid.update(Fringe{2.0 * static_cast<double>(n), 0.0, outcome * v_model[n]});
        if ((i + 1) % kBareCheckEvery == 0 && converged(grid, c.omega_true, eps, t.res.identifiability_period)) {
            break;
        }
    }
    t.finish(grid, c.omega_true);
    return t.res;
}

// Flip count of one code block for a shot with time multiplier M.
struct BlockDraw {
    int flips = 0;
    double unflipped_eps = 0.0;
};

BlockDraw draw_block(CounterRng &rng, const Device &dev, int first, int N, double omega, std::int64_t M) {
    BlockDraw b;
    double m = static_cast<double>(M);
    for (int k = first; k < first + N; k++) {
        QubitHamiltonian h{m * (omega + dev.eps[k]), m * dev.gamma[k], 0.0};
        double p = flip_probability(decompose(h));
        if (rng.bernoulli(p)) {
            b.flips++;
        } else {
            b.unflipped_eps += dev.eps[k];
        }
    }
    return b;
}

TargetResult run_code_target(const RunConfig &c, std::size_t e) {
    const double eps = c.eps_targets[e];
    const int N = c.code.N();
    const int L = c.code.L;
    const int B = c.code.blocks;
    const bool post = c.mode == InferenceMode::post_selection;
    const std::int64_t M_max = max_multiplier(c, eps);
    Device dev = draw_device(c, B * N);

    Tracker t{{}, c.keep_ledger};
    t.res.eps = eps;
    t.res.identifiability_period = identifiability_period(c);
    t.res.grid_bits = grid_bits_for_target(c, eps);
    PosteriorGrid grid = PosteriorGrid::uniform(t.res.grid_bits, grid_domain(c));
    std::int64_t updates = 0;

    for (std::int64_t i = 0; i < c.budget_K; i++) {
        CounterRng rng(stream_key({c.seed, e, static_cast<std::uint64_t>(i)}));
        std::int64_t M = rng.uniform_int(1, M_max);
        double theta = kTwoPi * rng.uniform();
        double m = static_cast<double>(M);

        ShotRecord r;
        r.index = i;
        r.multiplier = M;
        r.theta = theta;
        r.cost = static_cast<std::int64_t>(B) * N * M;

        double p_plus;
        bool all_trivial = true;
        if (B == 1) {
            BlockDraw b = draw_block(rng, dev, 0, N, c.omega_true, M);
            int d = std::min(b.flips, N - b.flips);
            r.syndrome_d[0] = d;
            all_trivial = d == 0;
            // A decoder failure (flips > L) inverts the logical, reversing the fringe.
            double arg = b.flips <= L ? 2.0 * (N - b.flips) * m * c.omega_true - theta
                                      : 2.0 * d * m * c.omega_true + theta;
            p_plus = 0.5 * (1.0 + std::cos(arg));
        } else {
            double phase = 0.0;
            for (int j = 0; j < B; j++) {
                BlockDraw b = draw_block(rng, dev, j * N, N, c.omega_true, M);
                int d = std::min(b.flips, N - b.flips);
                r.syndrome_d[j] = d;
                all_trivial = all_trivial && d == 0;
                double block = (N - b.flips) * (m * c.omega_true - theta) + b.unflipped_eps;
                phase += b.flips <= L ? block : -block;
            }
            double cp = std::cos(phase);
            p_plus = cp * cp;
        }
        r.outcome = rng.bernoulli(p_plus) ? 1 : -1;
        r.accepted = post ? all_trivial : true;
        t.record(r);

        if (!r.accepted) {
            continue;
        }
        grid.update(shot_likelihood(c, r));
        updates++;
        std::int64_t every = post ? kAcceptedCheckEvery : kFullLikelihoodCheckEvery;
        if (updates % every == 0 && converged(grid, c.omega_true, eps, t.res.identifiability_period)) {
            break;
        }
    }
    t.finish(grid, c.omega_true);
    return t.res;
}

RunResult run_all(const RunConfig &c) {
    c.validate();
    RunResult out;
    for (std::size_t e = 0; e < c.eps_targets.size(); e++) {
        out.targets.push_back(run_single_target(c, e));
    }
    return out;
}

}  // namespace

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::bare_ghz:
            return "bare_ghz";
        case Protocol::bitflip:
            return "bitflip";
        case Protocol::combined:
            return "combined";
        case Protocol::binary_search_ghz:
            return "binary_search_ghz";
        case Protocol::binary_search_code:
            return "binary_search_code";
        case Protocol::sequential:
            return "sequential";
        case Protocol::sql_baseline:
            return "sql_baseline";
        case Protocol::sql_barrier_probe:
            return "sql_barrier_probe";
    }
    return "unknown";
}

std::string to_string(InferenceMode m) {
    return m == InferenceMode::post_selection ? "post_selection" : "full_likelihood";
}

std::optional<Protocol> parse_protocol(const std::string &raw) {
    std::string s = raw;
    std::replace(s.begin(), s.end(), '-', '_');
    for (Protocol p : {Protocol::bare_ghz, Protocol::bitflip, Protocol::combined, Protocol::binary_search_ghz,
                       Protocol::binary_search_code, Protocol::sequential, Protocol::sql_baseline,
                       Protocol::sql_barrier_probe}) {
        if (to_string(p) == s) {
            return p;
        }
    }
    return std::nullopt;
}

std::optional<InferenceMode> parse_mode(const std::string &raw) {
    std::string s = raw;
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "post_selection") {
        return InferenceMode::post_selection;
    }
    if (s == "full_likelihood") {
        return InferenceMode::full_likelihood;
    }
    return std::nullopt;
}

void RunConfig::validate() const {
    if (eps_targets.empty()) {
        throw ConfigError("eps_targets must not be empty");
    }
    for (std::size_t i = 0; i < eps_targets.size(); i++) {
        if (!(eps_targets[i] > 0)) {
            throw ConfigError("eps_targets must be positive");
        }
        if (i > 0 && eps_targets[i] > eps_targets[i - 1]) {
            throw ConfigError("eps_targets must be sorted descending");
        }
    }
    if (budget_K < 1) {
        throw ConfigError("budget_K must be >= 1");
    }
    if (code.L < 0) {
        throw ConfigError("code L must be >= 0");
    }
    if (grid_bits < PosteriorGrid::kMinBits || grid_bits > PosteriorGrid::kMaxBits) {
        throw ConfigError("grid_bits out of range");
    }
    if (noise.sigma_eps < 0 || noise.heterogeneity_h < 0 || noise.gamma_mean < 0) {
        throw ConfigError("noise parameters must be non-negative");
    }
    switch (protocol) {
        case Protocol::bare_ghz:
            if (noise.model != NoiseModel::depolarizing) {
                throw ConfigError("bare_ghz requires the depolarizing noise model");
            }
            break;
        case Protocol::bitflip:
            if (noise.model != NoiseModel::hamiltonian || code.blocks != 1) {
                throw ConfigError("bitflip requires the hamiltonian noise model and one block");
            }
            break;
        case Protocol::combined:
            if (noise.model != NoiseModel::hamiltonian || code.blocks != 3) {
                throw ConfigError("combined requires the hamiltonian noise model and three blocks");
            }
            break;
        default:
            break;
    }
}

double identifiability_period(const RunConfig &c) {
    if (c.protocol == Protocol::bare_ghz || c.mode == InferenceMode::full_likelihood) {
        return kPi;
    }
    return kPi / static_cast<double>(c.code.total_qubits());
}

double grid_domain(const RunConfig &c) {
    return c.protocol == Protocol::bare_ghz ? kTwoPi : identifiability_period(c);
}

std::int64_t max_multiplier(const RunConfig &c, double eps) {
    std::int64_t N = c.code.N();
    std::int64_t m = static_cast<std::int64_t>(std::floor(1.0 / eps)) / N;
    std::int64_t cap = (std::int64_t{1} << (c.grid_bits - 2)) / N;
    return std::max<std::int64_t>(1, std::min(m, std::max<std::int64_t>(cap, 1)));
}

int grid_bits_for_target(const RunConfig &c, double eps) {
    if (c.protocol == Protocol::bare_ghz) {
        return c.grid_bits;
    }
    double P = grid_domain(c);
    // Highest fringe frequency over the grid period, in whole oscillations.
    double fmax = 2.0 * c.code.total_qubits() * static_cast<double>(max_multiplier(c, eps));
    double cycles = fmax * P / kTwoPi;
    double need = std::max(4.0 * P / eps, 8.0 * cycles);
    int m = static_cast<int>(std::ceil(std::log2(need)));
    int lo = std::min(8, c.grid_bits);
    return std::clamp(m, lo, c.grid_bits);
}

Fringe shot_likelihood(const RunConfig &c, const ShotRecord &r) {
    double m = static_cast<double>(r.multiplier);
    if (c.protocol == Protocol::bare_ghz) {
        double v = std::pow(1.0 - std::clamp(c.noise.gamma_mean, 0.0, 0.99), m);
        return Fringe{2.0 * m, 0.0, r.outcome * v};
    }
    int N = c.code.N();
    int K = 0;
    for (int j = 0; j < c.code.blocks; j++) {
        K += N - r.syndrome_d[j];
    }
    if (c.code.blocks == 1) {
        return Fringe{2.0 * K * m, r.theta, static_cast<double>(r.outcome)};
    }
    return Fringe{2.0 * K * m, 2.0 * K * r.theta, static_cast<double>(r.outcome)};
}

TargetResult run_single_target(const RunConfig &c, std::size_t eps_index) {
    if (eps_index >= c.eps_targets.size()) {
        throw ConfigError("eps index out of range");
    }
    switch (c.protocol) {
        case Protocol::bare_ghz:
            return run_bare_target(c, eps_index);
        case Protocol::bitflip:
        case Protocol::combined:
            return run_code_target(c, eps_index);
        default:
            throw ConfigError("protocol " + to_string(c.protocol) + " has no per-target Bayesian run");
    }
}

RunResult run_bare_ghz(const RunConfig &c) {
    if (c.protocol != Protocol::bare_ghz) {
        throw ConfigError("run_bare_ghz: protocol tag must be bare_ghz");
    }
    return run_all(c);
}

RunResult run_bitflip(const RunConfig &c) {
    if (c.protocol != Protocol::bitflip) {
        throw ConfigError("run_bitflip: protocol tag must be bitflip");
    }
    return run_all(c);
}

RunResult run_combined(const RunConfig &c) {
    if (c.protocol != Protocol::combined) {
        throw ConfigError("run_combined: protocol tag must be combined");
    }
    return run_all(c);
}

std::int64_t binary_search_shots(int N, double sigma_eps, double eps, double width, double delta) {
    if (!(width > 0) || !(eps > 0)) {
        throw DomainError("binary_search_shots: width and eps must be positive");
    }
    int T = std::max(1, static_cast<int>(std::ceil(std::log2(width / eps))));
    double lambda = std::exp(-2.0 * N * sigma_eps * sigma_eps);
    // Decisions must be reliable once omega is eps/2 from the midpoint.
    double x = std::min(N * eps, kPi / 2);
    double eps_p = 0.5 * lambda * std::sin(x);
    double kl = kl_half_vs_p(0.5 + eps_p);
    auto M = static_cast<std::int64_t>(std::ceil(std::log(T / delta) / kl));
    return std::max<std::int64_t>(M, 10);
}

BinarySearchResult run_binary_search(const RunConfig &c, double eps) {
    const int N = c.probe_qubits;
    const double sigma = c.noise.sigma_eps;
    double lo;
    double width;
    if (c.interval_lo && c.interval_hi) {
        lo = *c.interval_lo;
        width = *c.interval_hi - *c.interval_lo;
    } else {
        CounterRng pos(stream_key({c.seed, kIntervalSalt}));
        width = kPi / (2.0 * N);
        lo = c.omega_true - pos.uniform() * width;
    }
    if (!(width > 0) || !std::isfinite(width)) {
        throw DomainError("run_binary_search: degenerate interval");
    }
    BinarySearchResult out;
    out.iterations = std::max(1, static_cast<int>(std::ceil(std::log2(width / eps))));
    out.shots_per_iteration = binary_search_shots(N, sigma, eps, width, c.delta);
    const double lambda = std::exp(-2.0 * N * sigma * sigma);
    const bool code_variant = c.protocol == Protocol::binary_search_code;
    const double tau = std::clamp(sigma, 1e-9, kPi / 4 - 1e-9);

    for (int it = 0; it < out.iterations; it++) {
        CounterRng rng(stream_key({c.seed, 0, static_cast<std::uint64_t>(it)}));
        double mid = lo + width / 2;
        bool upper;
        if (!code_variant) {
            // Reference offset of pi/4 makes the parity fringe odd around the midpoint.
            double p_plus = 0.5 * (1.0 - lambda * std::sin(2.0 * N * (c.omega_true - mid)));
            std::binomial_distribution<std::int64_t> binom(out.shots_per_iteration, p_plus);
            std::int64_t plus = binom(rng);
            upper = 2 * plus <= out.shots_per_iteration;
        } else {
            std::int64_t high = 0;
            std::int64_t low = 0;
            for (std::int64_t s = 0; s < out.shots_per_iteration; s++) {
                double sample = (c.omega_true - mid) + rng.normal(0.0, sigma);
                Category cat = three_category(sample, tau);
                high += cat == Category::High;
                low += cat == Category::Low;
            }
            upper = high > low;
        }
        out.total_shots += out.shots_per_iteration;
        width /= 2;
        if (upper) {
            lo = mid;
        }
        out.widths.push_back(width);
    }
    out.lo = lo;
    out.hi = lo + width;
    out.estimate = lo + width / 2;
    out.success = std::abs(out.estimate - c.omega_true) <= eps;
    return out;
}

namespace {

struct SequentialShot {
    bool accepted = false;
    bool above = false;
};

// One product-state query: N qubits each rotated to phi_eff, syndrome decoded,
// post-selected on k = N - 2j >= sqrt(N)/2, logical read out.
SequentialShot sequential_shot(CounterRng &rng, int N, double phi_eff) {
    phi_eff = std::clamp(phi_eff, -kPi / 2 + 1e-12, kPi / 2 - 1e-12);
    double s = std::sin(phi_eff);
    std::binomial_distribution<int> flips(N, s * s);
    int c = flips(rng);
    int j = std::min(c, N - c);
    int k = N - 2 * j;
    SequentialShot out;
    if (k < std::sqrt(static_cast<double>(N)) / 2) {
        return out;
    }
    out.accepted = true;
    double theta = syndrome_rotation_angle(N, j, phi_eff);
    double st = std::sin(theta);
    out.above = rng.bernoulli(st * st);
    return out;
}

}  // namespace

SequentialResult run_sequential(int N, double omega, double eps, double delta, std::uint64_t key) {
    if (N < 1 || N % 2 == 0) {
        throw DomainError("run_sequential: N must be odd");
    }
    double lo = 0.0;
    double width = kPi / 4;
    if (omega < lo || omega > lo + width) {
        throw DomainError("run_sequential: omega must lie in [0, pi/4]");
    }
    const double log_inv_delta = std::log(1.0 / delta);
    const int votes = 2 * static_cast<int>(std::ceil(log_inv_delta)) + 1;
    SequentialResult out;
    std::uint64_t counter = 0;
    while (width > eps) {
        // Amplification sized for the vote error bound, capped so that every
        // omega in the interval maps inside the monotone window (0, pi/2).
        auto M = static_cast<std::int64_t>(std::ceil(3.0 * log_inv_delta / (width * std::sqrt(double(N)))));
        auto window = static_cast<std::int64_t>(std::floor(3.0 * kPi / (8.0 * width)));
        M = std::max<std::int64_t>(1, std::min(M, std::max<std::int64_t>(window, 1)));
        bool above[2];
        for (int q = 0; q < 2; q++) {
            double t = lo + width * (q + 1) / 3.0;
            int yes = 0;
            int got = 0;
            while (got < votes) {
                CounterRng rng(stream_key({key, counter++}));
                SequentialShot s = sequential_shot(rng, N, kPi / 4 + static_cast<double>(M) * (omega - t));
                out.M_total += M;
                out.shots++;
                if (!s.accepted) {
                    continue;
                }
                got++;
                yes += s.above;
            }
            out.accepted_shots += got;
            above[q] = 2 * yes > votes;
        }
        if (!above[0]) {
            // keep [lo, lo + W/2]
        } else if (above[1]) {
            lo += width / 2;
        } else {
            lo += width / 4;
        }
        width /= 2;
        out.rounds++;
    }
    out.estimate = lo + width / 2;
    out.success = std::abs(out.estimate - omega) <= eps;
    return out;
}

double sequential_center_acceptance(int N, std::int64_t shots, std::uint64_t key) {
    std::int64_t acc = 0;
    for (std::int64_t i = 0; i < shots; i++) {
        CounterRng rng(stream_key({key, static_cast<std::uint64_t>(i)}));
        acc += sequential_shot(rng, N, kPi / 4).accepted;
    }
    return static_cast<double>(acc) / static_cast<double>(shots);
}

SqlBaselineResult run_sql_baseline(int N, double omega, double sigma_eps, int trials, std::uint64_t key) {
    if (N < 1 || trials < 2) {
        throw DomainError("run_sql_baseline: need N >= 1 and at least two trials");
    }
    SqlBaselineResult out;
    double s2 = std::sin(2.0 * omega);
    out.degenerate = std::abs(s2) < 1e-12;
    std::vector<double> est(trials);
    for (int tr = 0; tr < trials; tr++) {
        CounterRng rng(stream_key({key, static_cast<std::uint64_t>(tr)}));
        std::int64_t plus = 0;
        for (int k = 0; k < N; k++) {
            double wk = omega + (sigma_eps > 0 ? rng.normal(0.0, sigma_eps) : 0.0);
            double c = std::cos(wk);
            plus += rng.bernoulli(c * c);
        }
        // Pooled estimator: inverts P(+1) = cos^2(omega) at the mean outcome rate.
        double p = static_cast<double>(plus) / N;
        est[tr] = std::acos(std::sqrt(p));
    }
    double mean = 0;
    for (double v : est) {
        mean += v;
    }
    mean /= trials;
    double var = 0;
    for (double v : est) {
        var += (v - mean) * (v - mean);
    }
    out.mean = mean;
    out.variance = var / (trials - 1);
    return out;
}

SqlBarrierProbe run_sql_barrier_probe(int N, std::int64_t shots, std::uint64_t key) {
    SqlBarrierProbe out;
    out.exact = sql_barrier_total(N).value;
    const double phi = kPi / 4;
    double sum = 0;
    double sum2 = 0;
    for (std::int64_t i = 0; i < shots; i++) {
        CounterRng rng(stream_key({key, static_cast<std::uint64_t>(i)}));
        double s = std::sin(phi);
        std::binomial_distribution<int> flips(N, s * s);
        int c = flips(rng);
        int j = std::min(c, N - c);
        double theta = syndrome_rotation_angle(N, j, phi);
        double st = std::sin(theta);
        bool logical_one = rng.bernoulli(st * st);
        // (j, logical outcome) identifies the flip count; score of its binomial law.
        int flips_seen = logical_one ? N - j : j;
        double score = 2.0 * flips_seen / std::tan(phi) - 2.0 * (N - flips_seen) * std::tan(phi);
        double s2 = score * score;
        sum += s2;
        sum2 += s2 * s2;
    }
    double n = static_cast<double>(shots);
    out.empirical = sum / n;
    out.empirical_stderr = std::sqrt(std::max(0.0, sum2 / n - out.empirical * out.empirical) / n);
    return out;
}

RejectionOutcome rejection_filter(const std::vector<EffectiveTimeRecord> &records, int d_max, double P_min,
                                  double p, std::int64_t t_max, std::uint64_t key) {
    if (!(P_min > 0 && P_min <= 1) || d_max < 0) {
        throw DomainError("rejection_filter: need P_min in (0, 1] and d_max >= 0");
    }
    RejectionOutcome out;
    for (std::size_t i = 0; i < records.size(); i++) {
        const auto &r = records[i];
        if (r.d > d_max) {
            continue;
        }
        std::int64_t T = r.t - r.d;
        if (T < 1 || T > t_max - d_max) {
            continue;
        }
        double log_pr = std::lgamma(r.t + 1.0) - std::lgamma(r.d + 1.0) - std::lgamma(r.t - r.d + 1.0);
        log_pr += (r.d > 0 ? r.d * std::log(p) : 0.0) + (r.t - r.d > 0 ? (r.t - r.d) * std::log1p(-p) : 0.0);
        double pr = (p <= 0.0 && r.d > 0) || (p >= 1.0 && r.t > r.d) ? 0.0 : std::exp(log_pr);
        if (pr <= 0.0) {
            out.skipped_zero_probability++;
            continue;
        }
        double a = P_min / (pr * (d_max + 1));
        if (a > 1.0) {
            out.clamped++;
            a = 1.0;
        }
        CounterRng rng(stream_key({key, static_cast<std::uint64_t>(i)}));
        if (rng.bernoulli(a)) {
            out.accepted_times.push_back(T);
        }
    }
    return out;
}

}  // namespace eqsp
