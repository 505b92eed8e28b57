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

// eqsp: run sweeps, fit scaling exponents, run verification suites, and
// compare against the reference tables.
//
// Exit codes: 0 success, 1 runtime or check failure, 2 usage or config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "eqsp/errors.h"
#include "eqsp/protocols.h"
#include "eqsp/sweep.h"
#include "eqsp/verify.h"
#include "json.hpp"

namespace {

using json = nlohmann::json;
using namespace eqsp;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown for errors that should exit with the usage code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Resolved run settings. Every field maps to one JSON key and one flag.
struct RunSettings {
    std::string protocol = "bare-ghz";
    std::string profile = "desk";
    std::string mode = "post-selection";
    std::optional<std::string> noise_model;  // default follows the protocol
    double gamma = 0.0;
    double sigma_eps = 0.0;
    double h = 0.0;
    int L = 1;
    std::optional<int> blocks;
    std::optional<std::int64_t> budget;
    int grid_bits = 16;
    double omega = 0.3;
    double delta = 0.05;
    int probe_qubits = 15;
    std::optional<double> interval_lo;
    std::optional<double> interval_hi;
    std::optional<std::uint64_t> seed_first;
    std::optional<std::uint64_t> seed_last;
    std::optional<int> eps_count;
    std::optional<double> eps_lo;
    std::optional<double> eps_hi;
};

template <typename T>
void read_key(const json &j, const char *key, T &dst) {
    if (j.contains(key)) {
        dst = j.at(key).get<T>();
    }
}

template <typename T>
void read_key(const json &j, const char *key, std::optional<T> &dst) {
    if (j.contains(key)) {
        dst = j.at(key).get<T>();
    }
}

const std::vector<std::string> kConfigKeys = {
    "protocol", "profile",  "mode",       "noise_model", "gamma",       "sigma_eps",  "h",          "L",
    "blocks",   "budget",   "grid_bits",  "omega",       "delta",       "probe_qubits", "interval_lo",
    "interval_hi", "seed_first", "seed_last", "eps_count", "eps_lo", "eps_hi",
};

void load_config_file(const std::string &path, RunSettings &s) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config '" + path + "' must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
            throw UsageError("config '" + path + "': unknown key '" + key + "'");
        }
    }
    try {
        read_key(j, "protocol", s.protocol);
        read_key(j, "profile", s.profile);
        read_key(j, "mode", s.mode);
        read_key(j, "noise_model", s.noise_model);
        read_key(j, "gamma", s.gamma);
        read_key(j, "sigma_eps", s.sigma_eps);
        read_key(j, "h", s.h);
        read_key(j, "L", s.L);
        read_key(j, "blocks", s.blocks);
        read_key(j, "budget", s.budget);
        read_key(j, "grid_bits", s.grid_bits);
        read_key(j, "omega", s.omega);
        read_key(j, "delta", s.delta);
        read_key(j, "probe_qubits", s.probe_qubits);
        read_key(j, "interval_lo", s.interval_lo);
        read_key(j, "interval_hi", s.interval_hi);
        read_key(j, "seed_first", s.seed_first);
        read_key(j, "seed_last", s.seed_last);
        read_key(j, "eps_count", s.eps_count);
        read_key(j, "eps_lo", s.eps_lo);
        read_key(j, "eps_hi", s.eps_hi);
    } catch (const json::exception &e) {
        throw UsageError("config '" + path + "': wrong value type: " + e.what());
    }
}

json settings_json(const RunSettings &s, const SweepPlan &plan) {
    const RunConfig &c = plan.base;
    json j;
    j["protocol"] = to_string(c.protocol);
    j["profile"] = s.profile;
    j["mode"] = to_string(c.mode);
    j["noise_model"] = c.noise.model == NoiseModel::hamiltonian ? "hamiltonian" : "depolarizing";
    j["gamma"] = c.noise.gamma_mean;
    j["sigma_eps"] = c.noise.sigma_eps;
    j["h"] = c.noise.heterogeneity_h;
    j["L"] = c.code.L;
    j["blocks"] = c.code.blocks;
    j["budget"] = c.budget_K;
    j["grid_bits"] = c.grid_bits;
    j["omega"] = c.omega_true;
    j["delta"] = c.delta;
    j["probe_qubits"] = c.probe_qubits;
    if (c.interval_lo) {
        j["interval_lo"] = *c.interval_lo;
    }
    if (c.interval_hi) {
        j["interval_hi"] = *c.interval_hi;
    }
    j["seed_first"] = plan.seed_first;
    j["seed_last"] = plan.seed_last;
    j["eps_count"] = plan.eps.count;
    j["eps_lo"] = plan.eps.lo;
    j["eps_hi"] = plan.eps.hi;
    return j;
}

SweepPlan resolve_plan(const RunSettings &s) {
    RunConfig c;
    auto protocol = parse_protocol(s.protocol);
    if (!protocol) {
        throw UsageError("unknown protocol '" + s.protocol + "'");
    }
    c.protocol = *protocol;
    auto mode = parse_mode(s.mode);
    if (!mode) {
        throw UsageError("unknown mode '" + s.mode + "' (post-selection or full-likelihood)");
    }
    c.mode = *mode;

    bool coded = c.protocol == Protocol::bitflip || c.protocol == Protocol::combined;
    std::string model = s.noise_model.value_or(coded ? "hamiltonian" : "depolarizing");
    if (model == "hamiltonian") {
        c.noise.model = NoiseModel::hamiltonian;
    } else if (model == "depolarizing") {
        c.noise.model = NoiseModel::depolarizing;
    } else {
        throw UsageError("unknown noise model '" + model + "'");
    }
    c.noise.gamma_mean = s.gamma;
    c.noise.sigma_eps = s.sigma_eps;
    c.noise.heterogeneity_h = s.h;
    c.code.L = s.L;
    c.code.blocks = s.blocks.value_or(c.protocol == Protocol::combined ? 3 : 1);
    c.budget_K = s.budget.value_or(coded ? 50000 : 10000);
    c.grid_bits = s.grid_bits;
    c.omega_true = s.omega;
    c.delta = s.delta;
    c.probe_qubits = s.probe_qubits;
    c.interval_lo = s.interval_lo;
    c.interval_hi = s.interval_hi;

    SweepPlan plan;
    if (s.profile == "desk") {
        plan = SweepPlan::desk(c);
    } else if (s.profile == "paper") {
        plan = SweepPlan::paper(c);
    } else {
        throw UsageError("unknown profile '" + s.profile + "' (desk or paper)");
    }
    plan.seed_first = s.seed_first.value_or(plan.seed_first);
    plan.seed_last = s.seed_last.value_or(plan.seed_last);
    plan.eps.count = s.eps_count.value_or(plan.eps.count);
    plan.eps.lo = s.eps_lo.value_or(plan.eps.lo);
    plan.eps.hi = s.eps_hi.value_or(plan.eps.hi);
    plan.threads = threads_from_env();
    plan.validate();
    return plan;
}

std::string format_alpha(const Aggregate &a) {
    char buf[128];
    if (a.sem) {
        std::snprintf(buf, sizeof(buf), "%.3f +- %.3f", a.mean_alpha, *a.sem);
    } else {
        std::snprintf(buf, sizeof(buf), "%.3f", a.mean_alpha);
    }
    return buf;
}

void print_summary(const ConfigSummary &s, FitMethod method) {
    const Aggregate &a = s.aggregate;
    std::printf("%s: alpha (%s) = %s over %d seed(s), converged %.1f%%, acceptance %.1f%%", s.key.describe().c_str(),
                to_string(method).c_str(), format_alpha(a).c_str(), a.seeds, 100.0 * a.mean_converged_fraction,
                100.0 * a.mean_acceptance);
    if (s.failed_rows > 0) {
        std::printf(", %lld failed row(s)", static_cast<long long>(s.failed_rows));
    }
    std::printf("\n");
}

void write_ledger(const std::string &path, const SweepPlan &plan) {
    std::vector<ShotRecord> ledger;
    std::vector<double> eps = plan.eps.points();
    RunConfig c = plan.base;
    c.keep_ledger = true;
    run_unit(c, plan.seed_first, eps, 0, &ledger);
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write ledger '" + path + "'");
    }
    out << "index,multiplier,theta,d0,d1,d2,outcome,accepted,cost\n";
    for (const ShotRecord &r : ledger) {
        out << r.index << ',' << r.multiplier << ',' << r.theta << ',' << r.syndrome_d[0] << ',' << r.syndrome_d[1]
            << ',' << r.syndrome_d[2] << ',' << r.outcome << ',' << (r.accepted ? 1 : 0) << ',' << r.cost << '\n';
    }
}

int cmd_run(const std::optional<std::string> &config_path, RunSettings flags, const std::set<std::string> &given,
            const std::string &out_path, const std::optional<std::string> &ledger_path) {
    RunSettings s;
    if (config_path) {
        load_config_file(*config_path, s);
    }
    // Flags override file values only when passed explicitly.
#define EQSP_OVERRIDE(name)        \
    if (given.count(#name)) {      \
        s.name = flags.name;       \
    }
    EQSP_OVERRIDE(protocol)
    EQSP_OVERRIDE(profile)
    EQSP_OVERRIDE(mode)
    EQSP_OVERRIDE(noise_model)
    EQSP_OVERRIDE(gamma)
    EQSP_OVERRIDE(sigma_eps)
    EQSP_OVERRIDE(h)
    EQSP_OVERRIDE(L)
    EQSP_OVERRIDE(blocks)
    EQSP_OVERRIDE(budget)
    EQSP_OVERRIDE(grid_bits)
    EQSP_OVERRIDE(omega)
    EQSP_OVERRIDE(seed_first)
    EQSP_OVERRIDE(seed_last)
    EQSP_OVERRIDE(eps_count)
    EQSP_OVERRIDE(eps_lo)
    EQSP_OVERRIDE(eps_hi)
#undef EQSP_OVERRIDE

    SweepPlan plan = resolve_plan(s);
    std::string resolved = settings_json(s, plan).dump();
    std::string metadata = "config_hash=" + config_hash(resolved) + " wls_weights=inverse-density config=" + resolved;

    std::vector<SweepRow> rows = run_sweep(plan);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + out_path + "'");
    }
    write_sweep_csv(out, rows, metadata);
    out.close();
    if (ledger_path) {
        write_ledger(*ledger_path, plan);
    }

    std::size_t failed = 0;
    for (const SweepRow &r : rows) {
        failed += r.failed;
    }
    std::printf("wrote %zu rows to %s (config %s)\n", rows.size(), out_path.c_str(),
                config_hash(resolved).c_str());
    try {
        for (const ConfigSummary &sum : summarize(rows, FitMethod::ols)) {
            print_summary(sum, FitMethod::ols);
        }
    } catch (const InsufficientDataError &e) {
        std::printf("fit skipped: %s\n", e.what());
    }
    return failed == rows.size() ? kExitFailure : kExitOk;
}

std::vector<SweepRow> load_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    try {
        return read_sweep_csv(in);
    } catch (const ConfigError &e) {
        throw UsageError(path + ": " + e.what());
    }
}

FitMethod parse_method(const std::string &m) {
    if (m == "ols") {
        return FitMethod::ols;
    }
    if (m == "wls") {
        return FitMethod::wls;
    }
    throw UsageError("unknown fit method '" + m + "' (ols or wls)");
}

int cmd_fit(const std::vector<std::string> &paths, const std::string &method_name, bool compare,
            double alpha_band) {
    FitMethod method = parse_method(method_name);
    std::vector<SweepRow> rows;
    for (const std::string &p : paths) {
        std::vector<SweepRow> part = load_csv(p);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    bool ok = true;
    for (const ConfigSummary &s : summarize(rows, method)) {
        print_summary(s, method);
        if (compare) {
            Tolerance tol;
            tol.alpha_band = alpha_band;
            Comparison c = compare_to_reference(s.aggregate, find_reference(s.key), tol);
            std::printf("  compare: %s\n", c.report.c_str());
            ok = ok && c.matched && c.pass;
        }
    }
    return ok ? kExitOk : kExitFailure;
}

int cmd_report(const std::vector<std::string> &paths, const std::string &method_name) {
    FitMethod method = parse_method(method_name);
    std::vector<SweepRow> rows;
    for (const std::string &p : paths) {
        std::vector<SweepRow> part = load_csv(p);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::vector<ConfigSummary> sums;
    if (!rows.empty()) {
        sums = summarize(rows, method);
    }
    std::printf("%-6s %-58s %16s %10s %16s %10s\n", "table", "configuration", "ref alpha", "ref acc%", "measured alpha",
                "acc%");
    bool ok = true;
    for (const ReferenceRow &ref : reference_rows()) {
        char acc_buf[32] = "-";
        if (ref.acceptance_pct) {
            std::snprintf(acc_buf, sizeof(acc_buf), "%.1f", *ref.acceptance_pct);
        }
        std::string acc = acc_buf;
        char refa[64];
        std::snprintf(refa, sizeof(refa), "%.2f +- %.3g", ref.alpha, ref.alpha_sem);
        std::string measured = "-";
        std::string macc = "-";
        for (const ConfigSummary &s : sums) {
            if (s.key.matches(ref.key)) {
                Comparison c = compare_to_reference(s.aggregate, ref, Tolerance{});
                measured = format_alpha(s.aggregate) + (c.pass ? "" : " !");
                char b[32];
                std::snprintf(b, sizeof(b), "%.1f", 100.0 * s.aggregate.mean_acceptance);
                macc = b;
                ok = ok && c.pass;
            }
        }
        std::printf("%-6s %-58s %16s %10s %16s %10s\n", ref.table.c_str(), ref.key.describe().c_str(), refa,
                    acc.c_str(), measured.c_str(), macc.c_str());
    }
    for (const ConfigSummary &s : sums) {
        if (!find_reference(s.key)) {
            std::printf("%-6s %-58s %16s %10s %16s\n", "-", s.key.describe().c_str(), "unmatched", "-",
                        format_alpha(s.aggregate).c_str());
        }
    }
    return ok ? kExitOk : kExitFailure;
}

int cmd_verify(const std::vector<std::string> &requested, bool all) {
    std::vector<std::string> ids = requested;
    if (ids.empty()) {
        for (const SuiteInfo &s : verify_suites()) {
            if (all || !s.heavy) {
                ids.push_back(s.id);
            }
        }
    }
    for (const std::string &id : ids) {
        bool known = false;
        for (const SuiteInfo &s : verify_suites()) {
            known = known || s.id == id;
        }
        if (!known) {
            throw UsageError("unknown suite '" + id + "'");
        }
    }
    VerifyOptions opt;
    opt.threads = threads_from_env();
    std::vector<CheckResult> results;
    for (const std::string &id : ids) {
        CheckResult r = run_suite(id, opt);
        std::printf("== %s: %s\n", r.id.c_str(), r.title.c_str());
        for (const std::string &line : r.lines) {
            std::printf("   %s\n", line.c_str());
        }
        std::fflush(stdout);
        results.push_back(std::move(r));
    }
    std::printf("\n%-18s %-6s %9s\n", "suite", "result", "seconds");
    bool ok = true;
    for (const CheckResult &r : results) {
        std::printf("%-18s %-6s %9.2f\n", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.seconds);
        ok = ok && r.pass;
    }
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"eqsp: error-corrected phase estimation sweeps and checks"};
    app.require_subcommand(1);

    RunSettings flags;
    std::optional<std::string> config_path;
    std::string out_path;
    std::optional<std::string> ledger_path;
    auto *run = app.add_subcommand("run", "Run a seed x precision sweep and write a CSV");
    run->add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "Output CSV path")->required();
    run->add_option("--ledger", ledger_path, "Also write the shot ledger of the first unit");
    run->add_option("--protocol", flags.protocol, "bare-ghz, bitflip, combined, binary-search-ghz, ...");
    run->add_option("--profile", flags.profile, "desk or paper sweep scale");
    run->add_option("--mode", flags.mode, "post-selection or full-likelihood");
    run->add_option("--noise-model", flags.noise_model, "depolarizing or hamiltonian");
    run->add_option("--gamma", flags.gamma, "Mean noise strength");
    run->add_option("--sigma-eps", flags.sigma_eps, "Per-qubit phase noise standard deviation");
    run->add_option("--hetero", flags.h, "Relative spread of per-qubit noise");
    run->add_option("--L", flags.L, "Repetition code distance parameter, N = 2L+1");
    run->add_option("--blocks", flags.blocks, "Code blocks");
    run->add_option("--budget", flags.budget, "Experiments per target");
    run->add_option("--grid-bits", flags.grid_bits, "Posterior grid size 2^m");
    run->add_option("--omega", flags.omega, "True phase");
    run->add_option("--seed-first", flags.seed_first, "First seed");
    run->add_option("--seed-last", flags.seed_last, "Last seed");
    run->add_option("--eps-count", flags.eps_count, "Precision targets");
    run->add_option("--eps-lo", flags.eps_lo, "Smallest target");
    run->add_option("--eps-hi", flags.eps_hi, "Largest target");

    std::vector<std::string> fit_paths;
    std::string method = "ols";
    bool compare = false;
    double alpha_band = 0.2;
    auto *fit = app.add_subcommand("fit", "Fit scaling exponents from sweep CSVs");
    fit->add_option("--csv", fit_paths, "Sweep CSV file(s)")->required();
    fit->add_option("--method", method, "ols or wls");
    fit->add_flag("--compare", compare, "Compare against the reference tables");
    fit->add_option("--alpha-band", alpha_band, "Allowed |alpha - reference| for --compare");

    std::vector<std::string> report_paths;
    std::string report_method = "ols";
    auto *report = app.add_subcommand("report", "Reference table with measured exponents alongside");
    report->add_option("--csv", report_paths, "Sweep CSV file(s)");
    report->add_option("--method", report_method, "ols or wls");

    std::vector<std::string> suites;
    bool all = false;
    auto *verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--suite", suites, "Suite id (repeatable); default: all fast suites");
    verify->add_flag("--all", all, "Include heavy suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) {
            std::set<std::string> given;
            for (const char *name : {"protocol", "profile", "mode", "noise-model", "gamma", "sigma-eps", "hetero", "L",
                                     "blocks", "budget", "grid-bits", "omega", "seed-first", "seed-last", "eps-count",
                                     "eps-lo", "eps-hi"}) {
                if (run->count(std::string("--") + name) > 0) {
                    std::string key = name;
                    std::replace(key.begin(), key.end(), '-', '_');
                    if (key == "hetero") {
                        key = "h";
                    }
                    given.insert(key);
                }
            }
            return cmd_run(config_path, flags, given, out_path, ledger_path);
        }
        if (*fit) {
            return cmd_fit(fit_paths, method, compare, alpha_band);
        }
        if (*report) {
            return cmd_report(report_paths, report_method);
        }
        if (*verify) {
            return cmd_verify(suites, all);
        }
    } catch (const UsageError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitUsage;
}
