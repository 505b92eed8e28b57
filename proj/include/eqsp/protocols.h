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

#ifndef EQSP_PROTOCOLS_H
#define EQSP_PROTOCOLS_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqsp/bayes.h"
#include "eqsp/signal_core.h"

namespace eqsp {

enum class Protocol {
    bare_ghz,
    bitflip,
    combined,
    binary_search_ghz,
    binary_search_code,
    sequential,
    sql_baseline,
    sql_barrier_probe,
};

enum class InferenceMode { post_selection, full_likelihood };

std::string to_string(Protocol p);
std::string to_string(InferenceMode m);
std::optional<Protocol> parse_protocol(const std::string &s);
std::optional<InferenceMode> parse_mode(const std::string &s);

struct RunConfig {
    Protocol protocol = Protocol::bare_ghz;
    std::uint64_t seed = 2;
    double omega_true = 0.3;
    std::vector<double> eps_targets;
    std::int64_t budget_K = 10000;
    InferenceMode mode = InferenceMode::post_selection;
    CodeShape code;
    NoiseSpec noise;
    int grid_bits = 16;
    bool keep_ledger = false;

    // Binary search only. Interval defaults to width pi/(2N) placed around
    // omega at a seeded offset.
    double delta = 0.05;
    std::optional<double> interval_lo;
    std::optional<double> interval_hi;
    int probe_qubits = 15;

    void validate() const;
};

struct ShotRecord {
    std::int64_t index = 0;
    std::int64_t multiplier = 0;
    double theta = 0.0;
    std::array<int, 3> syndrome_d{0, 0, 0};
    int outcome = 1;
    bool accepted = true;
    std::int64_t cost = 0;
};

struct TargetResult {
    double eps = 0.0;
    bool converged = false;
    std::int64_t total_cost = 0;
    std::int64_t experiments = 0;
    std::int64_t accepted = 0;
    double estimate = 0.0;
    double circ_error = 0.0;
    double acceptance_rate = 1.0;
    double identifiability_period = kPi;
    int grid_bits = 0;
    std::vector<ShotRecord> ledger;
};

struct RunResult {
    std::vector<TargetResult> targets;
};

/// Runs one protocol for every eps target in the config. Each target uses an
/// independent RNG stream keyed by (seed, target index, experiment index).
RunResult run_bare_ghz(const RunConfig &config);
RunResult run_bitflip(const RunConfig &config);
RunResult run_combined(const RunConfig &config);

/// Runs only target `eps_index` of the config (used by the sweep scheduler).
TargetResult run_single_target(const RunConfig &config, std::size_t eps_index);

/// Likelihood model of a recorded shot, as the inference saw it.
Fringe shot_likelihood(const RunConfig &config, const ShotRecord &r);

/// Period of the protocol's likelihood in omega; errors are measured modulo it.
double identifiability_period(const RunConfig &config);
/// Span of the posterior grid: [0, 2 pi) for bare GHZ (fixed grid_bits), one
/// identifiability period otherwise (bits sized per target).
double grid_domain(const RunConfig &config);
int grid_bits_for_target(const RunConfig &config, double eps);
std::int64_t max_multiplier(const RunConfig &config, double eps);

struct BinarySearchResult {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
    std::int64_t shots_per_iteration = 0;
    std::int64_t total_shots = 0;
    std::vector<double> widths;  // interval width after each iteration
    bool success = false;        // |estimate - omega| <= eps
};

/// Shot count for one bisection step: max(ceil(ln(T/delta) / D_KL), 10).
std::int64_t binary_search_shots(int N, double sigma_eps, double eps, double width, double delta);

BinarySearchResult run_binary_search(const RunConfig &config, double eps);

struct SequentialResult {
    double estimate = 0.0;
    std::int64_t M_total = 0;
    int rounds = 0;
    std::int64_t shots = 0;
    std::int64_t accepted_shots = 0;
    bool success = false;
};

/// Sequential amplification search with a product-state register of N qubits.
SequentialResult run_sequential(int N, double omega, double eps, double delta, std::uint64_t key);

/// Post-selection acceptance of the sequential protocol when the amplified
/// phase sits exactly on a threshold (flip probability 1/2), by simulation.
double sequential_center_acceptance(int N, std::int64_t shots, std::uint64_t key);

struct SqlBaselineResult {
    double mean = 0.0;
    double variance = 0.0;
    bool degenerate = false;  // operating point where all outcomes coincide
};

SqlBaselineResult run_sql_baseline(int N, double omega, double sigma_eps, int trials, std::uint64_t key);

struct SqlBarrierProbe {
    double exact = 0.0;
    double empirical = 0.0;
    double empirical_stderr = 0.0;
};

SqlBarrierProbe run_sql_barrier_probe(int N, std::int64_t shots, std::uint64_t key);

struct EffectiveTimeRecord {
    std::int64_t t = 0;  // elapsed time steps
    int d = 0;           // detected errors
};

struct RejectionOutcome {
    std::vector<std::int64_t> accepted_times;  // effective times t - d
    std::int64_t skipped_zero_probability = 0;
    std::int64_t clamped = 0;
};

/// Accepts record (t, d) with d <= d_max and 1 <= t - d <= t_max - d_max with
/// probability P_min / (Pr(d | t) (d_max + 1)), Pr binomial with per-step rate p.
RejectionOutcome rejection_filter(const std::vector<EffectiveTimeRecord> &records, int d_max, double P_min,
                                  double p, std::int64_t t_max, std::uint64_t key);

}  // namespace eqsp

#endif
