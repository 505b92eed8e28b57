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

#ifndef EQSP_SWEEP_H
#define EQSP_SWEEP_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqsp/protocols.h"

namespace eqsp {

/// count points log-spaced from hi down to lo (descending, endpoints included).
struct EpsGrid {
    int count = 30;
    double lo = 1e-3;
    double hi = 1e-1;

    std::vector<double> points() const;
};

struct SweepPlan {
    std::uint64_t seed_first = 2;
    std::uint64_t seed_last = 11;
    EpsGrid eps;
    RunConfig base;  // eps_targets and seed are filled per unit
    int threads = 1;

    void validate() const;
    std::size_t seed_count() const {
        return seed_last >= seed_first ? static_cast<std::size_t>(seed_last - seed_first + 1) : 0;
    }

    /// 10 seeds (2..11), 30 targets in [1e-3, 1e-1].
    static SweepPlan desk(const RunConfig &base);
    /// 40 seeds (2..41), 60 targets in [1e-4, 1e-1].
    static SweepPlan paper(const RunConfig &base);
};

struct SweepRow {
    std::uint64_t seed = 0;
    Protocol protocol = Protocol::bare_ghz;
    InferenceMode mode = InferenceMode::post_selection;
    int L = 0;
    double gamma = 0.0;
    double sigma_eps = 0.0;
    double h = 0.0;  // noise heterogeneity
    double eps = 0.0;
    bool converged = false;
    std::int64_t T = 0;
    std::int64_t experiments = 0;
    double estimate = 0.0;
    double circ_error = 0.0;
    double acceptance = 1.0;
    bool failed = false;
    std::string failure;  // message when failed
};

/// Runs every (seed, eps) unit on plan.threads workers. Rows come back in
/// (seed, eps) order regardless of scheduling; a unit that throws becomes a
/// failed row and the rest of the sweep continues.
std::vector<SweepRow> run_sweep(const SweepPlan &plan);

/// Runs one unit. Exposed for tests and for ledger dumps.
SweepRow run_unit(const RunConfig &base, std::uint64_t seed, const std::vector<double> &eps, std::size_t eps_index,
                  std::vector<ShotRecord> *ledger = nullptr);

/// Worker count from EQSP_THREADS (default 1). Throws ConfigError on junk.
int threads_from_env();

/// FNV-1a 64 of the text, as 16 hex digits.
std::string config_hash(const std::string &text);

/// CSV with a leading "# ..." metadata line, then the header row.
void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows, const std::string &metadata);
/// Parses a sweep CSV. Comment lines are skipped; throws ConfigError on a
/// missing column or malformed value.
std::vector<SweepRow> read_sweep_csv(std::istream &in);

enum class FitMethod { ols, wls };
std::string to_string(FitMethod m);

struct FitPoint {
    double eps = 0.0;
    double T = 0.0;
};

struct FitResult {
    double alpha = 0.0;
    double intercept = 0.0;
    double stderr_alpha = 0.0;
    int n_points = 0;
    FitMethod method = FitMethod::ols;
    double converged_fraction = 1.0;
};

/// Fits log T = -alpha log eps + c. WLS weights each point by the width of the
/// log-eps interval it covers (half the gap to each neighbour), i.e. inverse
/// local point density. Needs at least 3 points.
FitResult fit_power_law(std::span<const FitPoint> points, FitMethod method);

/// Fit over the converged, non-failed rows of one seed; sets converged_fraction.
FitResult fit_rows(std::span<const SweepRow> rows, FitMethod method, std::optional<double> eps_below = {});

struct Aggregate {
    double mean_alpha = 0.0;
    std::optional<double> sem;  // absent for a single seed
    double mean_converged_fraction = 0.0;
    double mean_acceptance = 1.0;
    int seeds = 0;
};

Aggregate aggregate_seeds(std::span<const FitResult> fits);

/// Identifies one table configuration.
struct ConfigKey {
    Protocol protocol = Protocol::bare_ghz;
    InferenceMode mode = InferenceMode::post_selection;
    int L = 0;
    double gamma = 0.0;
    double sigma_eps = 0.0;
    double h = 0.0;

    bool matches(const ConfigKey &o) const;
    std::string describe() const;
};

ConfigKey key_of(const SweepRow &row);

struct ConfigSummary {
    ConfigKey key;
    Aggregate aggregate;
    std::vector<FitResult> fits;
    std::int64_t rows = 0;
    std::int64_t failed_rows = 0;
};

/// Groups rows by configuration and seed, fits each seed and aggregates.
/// Mean acceptance is the mean of per-row acceptance over non-failed rows.
std::vector<ConfigSummary> summarize(const std::vector<SweepRow> &rows, FitMethod method);

struct ReferenceRow {
    std::string table;
    ConfigKey key;
    double alpha = 0.0;
    double alpha_sem = 0.0;
    std::optional<double> converged_pct;
    std::optional<double> acceptance_pct;
};

/// Reference values from the published results tables, shipped with the build.
const std::vector<ReferenceRow> &reference_rows();
std::vector<ReferenceRow> parse_reference_csv(const std::string &text);
std::optional<ReferenceRow> find_reference(const ConfigKey &key);

struct Tolerance {
    double alpha_band = 0.2;
    std::optional<double> acceptance_slack_pct = 6.0;
    std::optional<double> converged_slack_pct;  // desk sweeps cover a narrower eps range
};

struct Comparison {
    bool matched = false;
    bool pass = false;
    std::string report;
};

Comparison compare_to_reference(const Aggregate &agg, const std::optional<ReferenceRow> &ref, const Tolerance &tol);

}  // namespace eqsp

#endif
