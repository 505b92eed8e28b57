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

#include "eqsp/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "eqsp/errors.h"
#include "eqsp/reference_data.h"
#include "eqsp/rng.h"

namespace eqsp {

namespace {

const char *const kColumns[] = {"seed",     "protocol", "mode",      "L",        "gamma",      "sigma_eps",
                                "eps",      "converged", "T",        "experiments", "estimate", "circ_error",
                                "acceptance", "status", "h"};
constexpr int kRequiredColumns = 13;  // status and h are optional on input

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string &s, const std::string &what) {
    if (s == "nan") {
        return std::nan("");
    }
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        throw ConfigError("malformed " + what + " value '" + s + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string &s, const std::string &what) {
    char *end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') {
        throw ConfigError("malformed " + what + " value '" + s + "'");
    }
    return v;
}

std::string mode_label(const SweepRow &r) {
    switch (r.protocol) {
        case Protocol::bitflip:
        case Protocol::combined:
            return to_string(r.mode);
        default:
            return "none";
    }
}

// Resource count and success for the non-grid protocols, in the same row shape.
void fill_search_row(const RunConfig &c, double eps, std::size_t eps_index, SweepRow &row) {
    if (c.protocol == Protocol::sequential) {
        SequentialResult s = run_sequential(c.probe_qubits, c.omega_true, eps, c.delta,
                                            stream_key({c.seed, static_cast<std::uint64_t>(eps_index)}));
        row.converged = s.success;
        row.T = s.M_total * c.probe_qubits;
        row.experiments = s.shots;
        row.estimate = s.estimate;
        row.circ_error = std::abs(s.estimate - c.omega_true);
        row.acceptance = s.shots > 0 ? static_cast<double>(s.accepted_shots) / static_cast<double>(s.shots) : 0.0;
        return;
    }
    BinarySearchResult b = run_binary_search(c, eps);
    std::int64_t qubits =
        c.protocol == Protocol::binary_search_code ? 3 * static_cast<std::int64_t>(c.code.N()) : c.probe_qubits;
    row.converged = b.success;
    row.T = b.total_shots * qubits;
    row.experiments = b.total_shots;
    row.estimate = b.estimate;
    row.circ_error = std::abs(b.estimate - c.omega_true);
    row.acceptance = 1.0;
}

}  // namespace

std::vector<double> EpsGrid::points() const {
    std::vector<double> out;
    if (count == 1) {
        out.push_back(hi);
        return out;
    }
    double a = std::log10(hi);
    double b = std::log10(lo);
    for (int i = 0; i < count; i++) {
        out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
    }
    return out;
}

void SweepPlan::validate() const {
    if (seed_count() == 0) {
        throw ConfigError("sweep seed range is empty");
    }
    if (eps.count < 1) {
        throw ConfigError("eps grid needs at least one point");
    }
    if (!(eps.lo > 0) || !(eps.hi >= eps.lo) || !std::isfinite(eps.hi)) {
        throw ConfigError("eps grid range must satisfy 0 < lo <= hi");
    }
    if (threads < 1) {
        throw ConfigError("threads must be >= 1");
    }
    switch (base.protocol) {
        case Protocol::sql_baseline:
        case Protocol::sql_barrier_probe:
            throw ConfigError(to_string(base.protocol) + " has no precision target; use the verify suites");
        default:
            break;
    }
    RunConfig probe = base;
    probe.eps_targets = eps.points();
    probe.validate();
}

SweepPlan SweepPlan::desk(const RunConfig &base) {
    SweepPlan p;
    p.base = base;
    p.seed_first = 2;
    p.seed_last = 11;
    p.eps = {30, 1e-3, 1e-1};
    return p;
}

SweepPlan SweepPlan::paper(const RunConfig &base) {
    SweepPlan p;
    p.base = base;
    p.seed_first = 2;
    p.seed_last = 41;
    p.eps = {60, 1e-4, 1e-1};
    return p;
}

SweepRow run_unit(const RunConfig &base, std::uint64_t seed, const std::vector<double> &eps, std::size_t eps_index,
                  std::vector<ShotRecord> *ledger) {
    RunConfig c = base;
    c.seed = seed;
    c.eps_targets = eps;
    c.keep_ledger = ledger != nullptr;

    SweepRow row;
    row.seed = seed;
    row.protocol = c.protocol;
    row.mode = c.mode;
    row.L = c.protocol == Protocol::bare_ghz ? 0 : c.code.L;
    row.gamma = c.noise.gamma_mean;
    row.sigma_eps = c.noise.sigma_eps;
    row.h = c.noise.heterogeneity_h;
    row.eps = eps[eps_index];
    try {
        switch (c.protocol) {
            case Protocol::bare_ghz:
            case Protocol::bitflip:
            case Protocol::combined: {
                TargetResult t = run_single_target(c, eps_index);
                row.converged = t.converged;
                row.T = t.total_cost;
                row.experiments = t.experiments;
                row.estimate = t.estimate;
                row.circ_error = t.circ_error;
                row.acceptance = t.acceptance_rate;
                if (ledger) {
                    *ledger = std::move(t.ledger);
                }
                break;
            }
            default:
                fill_search_row(c, row.eps, eps_index, row);
                break;
        }
    } catch (const std::exception &e) {
        row.failed = true;
        row.converged = false;
        row.failure = e.what();
        row.estimate = std::nan("");
        row.circ_error = std::nan("");
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepPlan &plan) {
    plan.validate();
    const std::vector<double> eps = plan.eps.points();
    const std::size_t per_seed = eps.size();
    const std::size_t units = plan.seed_count() * per_seed;
    std::vector<SweepRow> rows(units);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            std::size_t u = next.fetch_add(1);
            if (u >= units) {
                return;
            }
            std::uint64_t seed = plan.seed_first + u / per_seed;
            rows[u] = run_unit(plan.base, seed, eps, u % per_seed);
        }
    };
    int n = std::min<std::size_t>(static_cast<std::size_t>(plan.threads), units);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; i++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return rows;
}

int threads_from_env() {
    const char *v = std::getenv("EQSP_THREADS");
    if (v == nullptr || *v == '\0') {
        return 1;
    }
    char *end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
        throw ConfigError(std::string("EQSP_THREADS must be an integer in [1, 1024], got '") + v + "'");
    }
    return static_cast<int>(n);
}

std::string config_hash(const std::string &text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows, const std::string &metadata) {
    out << "# " << metadata << "\n";
    for (std::size_t i = 0; i < std::size(kColumns); i++) {
        out << (i ? "," : "") << kColumns[i];
    }
    out << "\n";
    for (const SweepRow &r : rows) {
        out << r.seed << ',' << to_string(r.protocol) << ',' << mode_label(r) << ',' << r.L << ','
            << fmt_double(r.gamma) << ',' << fmt_double(r.sigma_eps) << ',' << fmt_double(r.eps) << ','
            << (r.converged ? 1 : 0) << ',' << r.T << ',' << r.experiments << ',' << fmt_double(r.estimate) << ','
            << fmt_double(r.circ_error) << ',' << fmt_double(r.acceptance) << ',' << (r.failed ? "failed" : "ok")
            << ',' << fmt_double(r.h) << "\n";
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream &in) {
    std::string line;
    std::map<std::string, int> col;
    std::vector<SweepRow> rows;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> f = split(line, ',');
        if (col.empty()) {
            for (std::size_t i = 0; i < f.size(); i++) {
                col[f[i]] = static_cast<int>(i);
            }
            for (int i = 0; i < kRequiredColumns; i++) {
                if (!col.count(kColumns[i])) {
                    throw ConfigError(std::string("sweep CSV is missing column '") + kColumns[i] + "'");
                }
            }
            continue;
        }
        if (f.size() < col.size()) {
            throw ConfigError("sweep CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                              " fields, expected " + std::to_string(col.size()));
        }
        auto get = [&](const char *name) -> const std::string & { return f[col[name]]; };
        SweepRow r;
        r.seed = static_cast<std::uint64_t>(parse_int(get("seed"), "seed"));
        auto p = parse_protocol(get("protocol"));
        if (!p) {
            throw ConfigError("unknown protocol '" + get("protocol") + "' on line " + std::to_string(line_no));
        }
        r.protocol = *p;
        if (get("mode") != "none") {
            auto m = parse_mode(get("mode"));
            if (!m) {
                throw ConfigError("unknown mode '" + get("mode") + "' on line " + std::to_string(line_no));
            }
            r.mode = *m;
        }
        r.L = static_cast<int>(parse_int(get("L"), "L"));
        r.gamma = parse_double(get("gamma"), "gamma");
        r.sigma_eps = parse_double(get("sigma_eps"), "sigma_eps");
        r.eps = parse_double(get("eps"), "eps");
        std::int64_t conv = parse_int(get("converged"), "converged");
        if (conv != 0 && conv != 1) {
            throw ConfigError("converged must be 0 or 1 on line " + std::to_string(line_no));
        }
        r.converged = conv == 1;
        r.T = parse_int(get("T"), "T");
        r.experiments = parse_int(get("experiments"), "experiments");
        r.estimate = parse_double(get("estimate"), "estimate");
        r.circ_error = parse_double(get("circ_error"), "circ_error");
        r.acceptance = parse_double(get("acceptance"), "acceptance");
        if (col.count("status")) {
            r.failed = get("status") == "failed";
        }
        if (col.count("h")) {
            r.h = parse_double(get("h"), "h");
        }
        if (!(r.eps > 0)) {
            throw ConfigError("eps must be positive on line " + std::to_string(line_no));
        }
        rows.push_back(r);
    }
    if (col.empty()) {
        throw ConfigError("sweep CSV has no header row");
    }
    return rows;
}

std::string to_string(FitMethod m) {
    return m == FitMethod::ols ? "OLS" : "WLS";
}

FitResult fit_power_law(std::span<const FitPoint> points, FitMethod method) {
    const std::size_t n = points.size();
    if (n < 3) {
        throw InsufficientDataError("fit_power_law needs at least 3 converged points, got " + std::to_string(n));
    }
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; i++) {
        if (!(points[i].eps > 0) || !(points[i].T > 0)) {
            throw DomainError("fit_power_law: eps and T must be positive");
        }
        x[i] = std::log(points[i].eps);
        y[i] = std::log(points[i].T);
    }
    std::vector<double> w(n, 1.0);
    if (method == FitMethod::wls) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; i++) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
        for (std::size_t k = 0; k < n; k++) {
            double left = k > 0 ? x[order[k]] - x[order[k - 1]] : 0.0;
            double right = k + 1 < n ? x[order[k + 1]] - x[order[k]] : 0.0;
            double half = 0.5 * (left + right);
            if (k == 0 || k + 1 == n) {
                half = k == 0 ? right : left;  // endpoints take their one-sided gap
            }
            w[order[k]] = half;
        }
        double total = 0.0;
        for (double v : w) {
            total += v;
        }
        if (!(total > 0)) {
            std::fill(w.begin(), w.end(), 1.0);
        }
    }
    double sw = 0.0;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; i++) {
        sw += w[i];
        mx += w[i] * x[i];
        my += w[i] * y[i];
    }
    mx /= sw;
    my /= sw;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; i++) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0)) {
        throw InsufficientDataError("fit_power_law: all eps values coincide");
    }
    double slope = sxy / sxx;
    double c = my - slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; i++) {
        double r = y[i] - (c + slope * x[i]);
        sse += w[i] * r * r;
    }
    FitResult out;
    out.alpha = -slope;
    out.intercept = c;
    out.stderr_alpha = std::sqrt(std::max(0.0, sse / static_cast<double>(n - 2) / sxx));
    out.n_points = static_cast<int>(n);
    out.method = method;
    return out;
}

FitResult fit_rows(std::span<const SweepRow> rows, FitMethod method, std::optional<double> eps_below) {
    std::vector<FitPoint> pts;
    std::size_t considered = 0;
    for (const SweepRow &r : rows) {
        if (eps_below && !(r.eps < *eps_below)) {
            continue;
        }
        considered++;
        if (r.converged && !r.failed && r.T > 0) {
            pts.push_back({r.eps, static_cast<double>(r.T)});
        }
    }
    FitResult f = fit_power_law(pts, method);
    f.converged_fraction = considered ? static_cast<double>(pts.size()) / static_cast<double>(considered) : 0.0;
    return f;
}

Aggregate aggregate_seeds(std::span<const FitResult> fits) {
    if (fits.empty()) {
        throw InsufficientDataError("aggregate_seeds: no seed fits");
    }
    Aggregate a;
    a.seeds = static_cast<int>(fits.size());
    double n = static_cast<double>(fits.size());
    for (const FitResult &f : fits) {
        a.mean_alpha += f.alpha;
        a.mean_converged_fraction += f.converged_fraction;
    }
    a.mean_alpha /= n;
    a.mean_converged_fraction /= n;
    if (fits.size() >= 2) {
        double ss = 0.0;
        for (const FitResult &f : fits) {
            ss += (f.alpha - a.mean_alpha) * (f.alpha - a.mean_alpha);
        }
        a.sem = std::sqrt(ss / (n - 1)) / std::sqrt(n);
    }
    return a;
}

bool ConfigKey::matches(const ConfigKey &o) const {
    auto close = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    bool mode_relevant = protocol == Protocol::bitflip || protocol == Protocol::combined;
    return protocol == o.protocol && (!mode_relevant || mode == o.mode) && L == o.L && close(gamma, o.gamma) &&
           close(sigma_eps, o.sigma_eps) && close(h, o.h);
}

std::string ConfigKey::describe() const {
    std::ostringstream s;
    s << to_string(protocol);
    if (protocol == Protocol::bitflip || protocol == Protocol::combined) {
        s << " " << to_string(mode) << " L=" << L;
    }
    s << " gamma=" << fmt_double(gamma);
    if (sigma_eps > 0) {
        s << " sigma_eps=" << fmt_double(sigma_eps);
    }
    if (h > 0) {
        s << " h=" << fmt_double(h);
    }
    return s.str();
}

ConfigKey key_of(const SweepRow &row) {
    ConfigKey k;
    k.protocol = row.protocol;
    k.mode = row.mode;
    k.L = row.L;
    k.gamma = row.gamma;
    k.sigma_eps = row.sigma_eps;
    k.h = row.h;
    return k;
}

std::vector<ConfigSummary> summarize(const std::vector<SweepRow> &rows, FitMethod method) {
    std::vector<ConfigSummary> out;
    std::vector<std::map<std::uint64_t, std::vector<SweepRow>>> by_seed;
    std::vector<std::pair<double, std::int64_t>> accept;
    for (const SweepRow &r : rows) {
        ConfigKey k = key_of(r);
        std::size_t i = 0;
        while (i < out.size() && !out[i].key.matches(k)) {
            i++;
        }
        if (i == out.size()) {
            out.push_back({k, {}, {}, 0, 0});
            by_seed.emplace_back();
            accept.emplace_back(0.0, 0);
        }
        out[i].rows++;
        if (r.failed) {
            out[i].failed_rows++;
        } else {
            accept[i].first += r.acceptance;
            accept[i].second++;
        }
        by_seed[i][r.seed].push_back(r);
    }
    for (std::size_t i = 0; i < out.size(); i++) {
        for (auto &[seed, seed_rows] : by_seed[i]) {
            try {
                out[i].fits.push_back(fit_rows(seed_rows, method));
            } catch (const InsufficientDataError &) {
                // A seed with fewer than three converged targets has no exponent.
            }
        }
        if (!out[i].fits.empty()) {
            out[i].aggregate = aggregate_seeds(out[i].fits);
        }
        out[i].aggregate.mean_acceptance =
            accept[i].second ? accept[i].first / static_cast<double>(accept[i].second) : 0.0;
    }
    return out;
}

std::vector<ReferenceRow> parse_reference_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    bool header = true;
    std::vector<ReferenceRow> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 11) {
            throw ConfigError("reference table row has " + std::to_string(f.size()) + " fields: " + line);
        }
        ReferenceRow r;
        r.table = f[0];
        auto p = parse_protocol(f[1]);
        if (!p) {
            throw ConfigError("reference table: unknown protocol " + f[1]);
        }
        r.key.protocol = *p;
        if (f[2] != "none") {
            auto m = parse_mode(f[2]);
            if (!m) {
                throw ConfigError("reference table: unknown mode " + f[2]);
            }
            r.key.mode = *m;
        }
        r.key.L = static_cast<int>(parse_int(f[3], "L"));
        r.key.gamma = parse_double(f[4], "gamma");
        r.key.sigma_eps = parse_double(f[5], "sigma_eps");
        r.key.h = parse_double(f[6], "h");
        r.alpha = parse_double(f[7], "alpha");
        r.alpha_sem = parse_double(f[8], "alpha_sem");
        if (!f[9].empty()) {
            r.converged_pct = parse_double(f[9], "converged_pct");
        }
        if (!f[10].empty()) {
            r.acceptance_pct = parse_double(f[10], "acceptance_pct");
        }
        out.push_back(r);
    }
    return out;
}

const std::vector<ReferenceRow> &reference_rows() {
    static const std::vector<ReferenceRow> rows = parse_reference_csv(kReferenceTablesCsv);
    return rows;
}

std::optional<ReferenceRow> find_reference(const ConfigKey &key) {
    for (const ReferenceRow &r : reference_rows()) {
        if (r.key.matches(key)) {
            return r;
        }
    }
    return std::nullopt;
}

Comparison compare_to_reference(const Aggregate &agg, const std::optional<ReferenceRow> &ref, const Tolerance &tol) {
    Comparison c;
    std::ostringstream s;
    if (!ref) {
        s << "unmatched: no reference row for this configuration";
        c.report = s.str();
        return c;
    }
    c.matched = true;
    bool ok = std::abs(agg.mean_alpha - ref->alpha) <= tol.alpha_band;
    s << "table " << ref->table << ": alpha " << fmt_double(agg.mean_alpha) << " vs " << fmt_double(ref->alpha)
      << " +- " << fmt_double(tol.alpha_band) << (ok ? " ok" : " FAIL");
    if (tol.acceptance_slack_pct && ref->acceptance_pct) {
        double pct = 100.0 * agg.mean_acceptance;
        bool a = std::abs(pct - *ref->acceptance_pct) <= *tol.acceptance_slack_pct;
        s << "; acceptance " << fmt_double(pct) << "% vs " << fmt_double(*ref->acceptance_pct) << "% +- "
          << fmt_double(*tol.acceptance_slack_pct) << (a ? " ok" : " FAIL");
        ok = ok && a;
    }
    if (tol.converged_slack_pct && ref->converged_pct) {
        double pct = 100.0 * agg.mean_converged_fraction;
        bool a = std::abs(pct - *ref->converged_pct) <= *tol.converged_slack_pct;
        s << "; converged " << fmt_double(pct) << "% vs " << fmt_double(*ref->converged_pct) << "% +- "
          << fmt_double(*tol.converged_slack_pct) << (a ? " ok" : " FAIL");
        ok = ok && a;
    }
    c.pass = ok;
    c.report = s.str();
    return c;
}

}  // namespace eqsp
