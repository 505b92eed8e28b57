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

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "eqsp/errors.h"
#include "gtest/gtest.h"

namespace eqsp {
namespace {

RunConfig small_bitflip() {
    RunConfig c;
    c.protocol = Protocol::bitflip;
    c.noise.model = NoiseModel::hamiltonian;
    c.noise.gamma_mean = 0.05;
    c.code = {1, 1};
    c.budget_K = 50000;
    return c;
}

SweepPlan small_plan() {
    SweepPlan p;
    p.base = small_bitflip();
    p.seed_first = 2;
    p.seed_last = 3;
    p.eps = {5, 1e-3, 1e-1};
    return p;
}

TEST(EpsGrid, DescendingLogSpaced) {
    auto pts = EpsGrid{3, 1e-3, 1e-1}.points();
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_DOUBLE_EQ(pts[0], 1e-1);
    EXPECT_NEAR(pts[1], 1e-2, 1e-16);
    EXPECT_DOUBLE_EQ(pts[2], 1e-3);
    EXPECT_EQ((EpsGrid{1, 1e-2, 1e-2}.points().size()), 1u);
}

TEST(SweepPlan, Profiles) {
    SweepPlan d = SweepPlan::desk(small_bitflip());
    EXPECT_EQ(d.seed_count(), 10u);
    EXPECT_EQ(d.eps.count, 30);
    SweepPlan p = SweepPlan::paper(small_bitflip());
    EXPECT_EQ(p.seed_count(), 40u);
    EXPECT_EQ(p.eps.count, 60);
    EXPECT_DOUBLE_EQ(p.eps.lo, 1e-4);
}

TEST(SweepPlan, Validation) {
    SweepPlan p = small_plan();
    EXPECT_NO_THROW(p.validate());
    p.seed_last = 1;
    EXPECT_THROW(p.validate(), ConfigError);
    p = small_plan();
    p.base.protocol = Protocol::sql_baseline;
    EXPECT_THROW(p.validate(), ConfigError);
    p = small_plan();
    p.eps.lo = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(RunSweep, RowOrderAndThreadIndependence) {
    SweepPlan p = small_plan();
    auto one = run_sweep(p);
    p.threads = 3;
    auto three = run_sweep(p);
    ASSERT_EQ(one.size(), 10u);
    ASSERT_EQ(three.size(), one.size());
    for (std::size_t i = 0; i < one.size(); i++) {
        EXPECT_EQ(one[i].seed, 2 + i / 5);
        EXPECT_EQ(one[i].T, three[i].T);
        EXPECT_EQ(one[i].estimate, three[i].estimate);
        EXPECT_FALSE(one[i].failed);
    }
}

TEST(RunSweep, SearchProtocolsReportCost) {
    SweepPlan p = small_plan();
    p.base = RunConfig{};
    p.base.protocol = Protocol::sequential;
    p.base.probe_qubits = 9;
    auto rows = run_sweep(p);
    ASSERT_EQ(rows.size(), 10u);
    for (const SweepRow &r : rows) {
        EXPECT_GT(r.T, 0);
        EXPECT_EQ(r.T % 9, 0);
    }
}

TEST(SweepCsv, RoundTrip) {
    auto rows = run_sweep(small_plan());
    std::stringstream buf;
    write_sweep_csv(buf, rows, "config_hash=0 test");
    std::string text = buf.str();
    EXPECT_EQ(text.rfind("# config_hash=0 test\n", 0), 0u);
    auto back = read_sweep_csv(buf);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); i++) {
        EXPECT_EQ(back[i].seed, rows[i].seed);
        EXPECT_EQ(back[i].T, rows[i].T);
        EXPECT_EQ(back[i].converged, rows[i].converged);
        EXPECT_EQ(back[i].protocol, rows[i].protocol);
        EXPECT_NEAR(back[i].eps, rows[i].eps, 1e-9 * rows[i].eps);
    }
}

TEST(SweepCsv, MalformedInputThrows) {
    std::istringstream missing("seed,protocol\n1,bitflip\n");
    EXPECT_THROW(read_sweep_csv(missing), ConfigError);
    std::stringstream good;
    write_sweep_csv(good, run_sweep(small_plan()), "m");
    std::string text = good.str();
    text += "2,bitflip,post_selection,1,0.05,0,abc,1,100,10,0.3,0.001,1,ok,0\n";
    std::istringstream bad(text);
    EXPECT_THROW(read_sweep_csv(bad), ConfigError);
}

TEST(ConfigHash, Fnv1a64) {
    EXPECT_EQ(config_hash("abc"), "e71fa2190541574b");
    EXPECT_EQ(config_hash(""), "cbf29ce484222325");
}

TEST(ThreadsFromEnv, ParsesAndRejects) {
    ::setenv("EQSP_THREADS", "4", 1);
    EXPECT_EQ(threads_from_env(), 4);
    ::setenv("EQSP_THREADS", "four", 1);
    EXPECT_THROW(threads_from_env(), ConfigError);
    ::setenv("EQSP_THREADS", "0", 1);
    EXPECT_THROW(threads_from_env(), ConfigError);
    ::unsetenv("EQSP_THREADS");
    EXPECT_EQ(threads_from_env(), 1);
}

std::vector<FitPoint> power_law(double alpha, double c, int n) {
    std::vector<FitPoint> pts;
    for (double e : EpsGrid{n, 1e-3, 1e-1}.points()) {
        pts.push_back({e, c * std::pow(e, -alpha)});
    }
    return pts;
}

TEST(FitPowerLaw, RecoversExactExponent) {
    auto pts = power_law(2.0, 3.0, 12);
    for (FitMethod m : {FitMethod::ols, FitMethod::wls}) {
        FitResult f = fit_power_law(pts, m);
        EXPECT_NEAR(f.alpha, 2.0, 1e-12);
        EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
        EXPECT_NEAR(f.stderr_alpha, 0.0, 1e-10);
        EXPECT_EQ(f.n_points, 12);
    }
}

TEST(FitPowerLaw, NeedsThreePoints) {
    auto pts = power_law(1.0, 1.0, 2);
    EXPECT_THROW(fit_power_law(pts, FitMethod::ols), InsufficientDataError);
}

TEST(FitPowerLaw, WlsDownweightsDenseRegion) {
    // Sparse points at large eps follow slope 1, a dense cluster at small eps
    // follows slope 2. WLS weights by covered interval, so the sparse points
    // count for more than under OLS.
    std::vector<FitPoint> pts{{1e-1, 10}, {3e-2, 1e2 / 3}, {1e-2, 100}};
    for (int k = 0; k < 10; k++) {
        double e = 1e-3 * (1.0 + 0.01 * k);
        pts.push_back({e, 100 * std::pow(1e-2 / e, 2)});
    }
    double ols = fit_power_law(pts, FitMethod::ols).alpha;
    double wls = fit_power_law(pts, FitMethod::wls).alpha;
    EXPECT_LT(wls, ols);
}

TEST(Aggregate, SemNeedsTwoSeeds) {
    std::vector<FitResult> fits(1);
    fits[0].alpha = 1.1;
    EXPECT_FALSE(aggregate_seeds(fits).sem.has_value());
    fits.push_back(fits[0]);
    fits[1].alpha = 1.3;
    Aggregate a = aggregate_seeds(fits);
    EXPECT_NEAR(a.mean_alpha, 1.2, 1e-15);
    ASSERT_TRUE(a.sem.has_value());
    EXPECT_NEAR(*a.sem, 0.1, 1e-14);
}

TEST(Summarize, GroupsByConfiguration) {
    auto rows = run_sweep(small_plan());
    auto sums = summarize(rows, FitMethod::ols);
    ASSERT_EQ(sums.size(), 1u);
    EXPECT_EQ(sums[0].aggregate.seeds, 2);
    EXPECT_EQ(sums[0].rows, 10);
    EXPECT_EQ(sums[0].key.protocol, Protocol::bitflip);
    EXPECT_GT(sums[0].aggregate.mean_alpha, 0.5);
}

TEST(Reference, TablesAreShipped) {
    EXPECT_GE(reference_rows().size(), 30u);
    ConfigKey k;
    k.protocol = Protocol::bitflip;
    k.mode = InferenceMode::post_selection;
    k.L = 3;
    k.gamma = 0.1;
    auto ref = find_reference(k);
    ASSERT_TRUE(ref.has_value());
    EXPECT_DOUBLE_EQ(ref->alpha, 1.00);
    ASSERT_TRUE(ref->acceptance_pct.has_value());
    EXPECT_DOUBLE_EQ(*ref->acceptance_pct, 72.0);
    k.L = 7;
    EXPECT_FALSE(find_reference(k).has_value());
}

TEST(Reference, ParseRejectsBadRows) {
    EXPECT_THROW(parse_reference_csv("table,protocol\nII,bare_ghz\n"), ConfigError);
}

TEST(Compare, BandsAndUnmatched) {
    Aggregate a;
    a.mean_alpha = 1.05;
    a.mean_acceptance = 0.84;
    ReferenceRow ref;
    ref.alpha = 1.00;
    ref.acceptance_pct = 86.0;
    Comparison ok = compare_to_reference(a, ref, Tolerance{});
    EXPECT_TRUE(ok.matched);
    EXPECT_TRUE(ok.pass);
    a.mean_acceptance = 0.70;
    EXPECT_FALSE(compare_to_reference(a, ref, Tolerance{}).pass);
    Comparison none = compare_to_reference(a, std::nullopt, Tolerance{});
    EXPECT_FALSE(none.matched);
    EXPECT_FALSE(none.pass);
}

}  // namespace
}  // namespace eqsp
