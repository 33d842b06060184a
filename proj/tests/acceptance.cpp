// Acceptance harness: one function per acceptance criterion, each printing a
// [PASS]/[FAIL] line. Usage:
//
//   acceptance <path-to-cli> fast        # everything except the slow tier
//   acceptance <path-to-cli> 4           # explicit criterion numbers
//   acceptance <path-to-cli> all
//
// Exit code 0 iff every selected criterion passes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amlmc/analysis.hpp"
#include "amlmc/mlmc.hpp"
#include "amlmc/parallel.hpp"

using namespace amlmc;

namespace {

const double kReference = 0.44115;  // quadrature benchmark, cubic model, phi = |x|

std::string g_cli;
int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s criterion %2d: %s  (%s)\n", ok ? "[PASS]" : "[FAIL]", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Moments {
    double mean = 0, var = 0;
};

// 1. Stationary-density quadrature hits the benchmark value.
void criterion_1() {
    double v = invariant_expectation_1d(builtin_cubic_langevin(), observable_abs());
    report(1, "oracle benchmark", std::fabs(v - kReference) <= 1e-4,
           "value=" + fmt(v) + " |err|=" + fmt(std::fabs(v - kReference)) + " tol=1e-4");
}

// 2. Driver accuracy over 10 independent seeds at eps = 5e-3.
void criterion_2() {
    SdeModel m = builtin_cubic_langevin();
    MlmcConfig cfg;
    cfg.epsilon = 5e-3;
    double sq = 0.0, worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MlmcResult r = run_mlmc(m, cubic_policy(), observable_abs(), cfg, seed);
        double err = std::fabs(r.estimate - kReference);
        sq += err * err;
        worst = std::max(worst, err);
    }
    double rmse = std::sqrt(sq / 10.0);
    report(2, "mlmc accuracy, 10 seeds",
           rmse <= 1.5 * cfg.epsilon && worst <= 4.0 * cfg.epsilon,
           "rmse=" + fmt(rmse) + " (<= " + fmt(1.5 * cfg.epsilon) + "), worst=" + fmt(worst) +
               " (<= " + fmt(4.0 * cfg.epsilon) + ")");
}

Moments level_correction_moments(const SdeModel& m, const LevelSchedule& sched, int level,
                                 std::int64_t n, std::uint64_t seed) {
    std::vector<double> diffs(n);
    parallel_for(n, [&](std::int64_t i) {
        RngStream rng(seed, {static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(i),
                             StreamRole::coupled});
        CoupledSample s =
            level == 0 ? level0_sample(m, cubic_policy(), sched, observable_abs(), rng)
                       : coupled_sample(m, cubic_policy(), sched, level, observable_abs(), rng);
        diffs[i] = s.fine_value - s.coarse_value;
    });
    Moments out;
    for (double d : diffs) out.mean += d;
    out.mean /= static_cast<double>(n);
    for (double d : diffs) out.var += (d - out.mean) * (d - out.mean);
    out.var /= static_cast<double>(n - 1);
    return out;
}

// 3. Correction variance decays like M^-2l and is strictly decreasing.
void criterion_3() {
    SdeModel m = builtin_cubic_langevin();
    LevelSchedule sched = make_schedule(7, 2, 1.0, ScheduleMode::langevin);
    const std::int64_t n = 100000;
    std::vector<std::pair<int, double>> vars;
    bool decreasing = true;
    for (int level = 0; level <= 7; ++level) {
        Moments mo = level_correction_moments(m, sched, level, n, 101);
        vars.emplace_back(level, mo.var);
        if (level > 0 && mo.var >= vars[level - 1].second) decreasing = false;
    }
    FitResult fit = fit_order(vars, {3, 7}, 2);
    report(3, "variance decay", std::fabs(fit.slope + 2.0) <= 0.4 && decreasing,
           "slope=" + fmt(fit.slope) + " (-2 +- 0.4), strictly_decreasing=" +
               (decreasing ? std::string("yes") : std::string("no")));
}

// 4. Weak error decays at first order in the level scale (slow tier).
void criterion_4() {
    SdeModel m = builtin_cubic_langevin();
    LevelSchedule sched = make_schedule(7, 2, 1.0, ScheduleMode::langevin);
    auto curve =
        weak_error_curve(m, cubic_policy(), observable_abs(), sched, {2, 6}, 1000000, 211);
    FitResult fit = fit_order(curve, {2, 6}, 2);
    report(4, "weak order (slow)", std::fabs(fit.slope + 1.0) <= 0.3,
           "slope=" + fmt(fit.slope) + " (-1 +- 0.3)");
}

// 5. Total cost scales like eps^-2 across the accuracy sweep.
void criterion_5() {
    SdeModel m = builtin_cubic_langevin();
    double c_min = 1e300, c_max = 0.0;
    std::string detail;
    for (double eps : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
        MlmcConfig cfg;
        cfg.epsilon = eps;
        MlmcResult r = run_mlmc(m, cubic_policy(), observable_abs(), cfg, 31);
        double e2c = eps * eps * r.total_cost;
        c_min = std::min(c_min, e2c);
        c_max = std::max(c_max, e2c);
        detail += fmt(e2c) + " ";
    }
    report(5, "cost scaling", c_max / c_min < 3.0,
           "eps^2*cost = { " + detail + "}, max/min=" + fmt(c_max / c_min) + " < 3");
}

// 6. Telescoping identity across levels plus the exact pathwise identity.
void criterion_6() {
    SdeModel m = builtin_cubic_langevin();
    LevelSchedule sched = make_schedule(6, 2, 1.0, ScheduleMode::langevin);
    const std::int64_t n = 100000;
    bool means_ok = true;
    double worst_z = 0.0;

    auto marginal = [&](int level, bool fine, std::uint64_t seed) {
        std::vector<double> vals(n);
        parallel_for(n, [&](std::int64_t i) {
            RngStream rng(seed, {static_cast<std::uint64_t>(level),
                                 static_cast<std::uint64_t>(i), StreamRole::coupled});
            CoupledSample s =
                level == 0
                    ? level0_sample(m, cubic_policy(), sched, observable_abs(), rng)
                    : coupled_sample(m, cubic_policy(), sched, level, observable_abs(), rng);
            vals[i] = fine ? s.fine_value : s.coarse_value;
        });
        Moments mo;
        for (double v : vals) mo.mean += v;
        mo.mean /= static_cast<double>(n);
        for (double v : vals) mo.var += (v - mo.mean) * (v - mo.mean);
        mo.var /= static_cast<double>(n - 1);
        return mo;
    };

    for (int level = 1; level <= 5; ++level) {
        Moments coarse = marginal(level, false, 401);
        Moments fine_prev = marginal(level - 1, true, 503);
        double se = std::sqrt(coarse.var / n + fine_prev.var / n);
        double z = std::fabs(coarse.mean - fine_prev.mean) / se;
        worst_z = std::max(worst_z, z);
        if (z > 4.0) means_ok = false;
    }

    // Exact pathwise identity for f == 0, g == 1.
    SdeModel bm = polynomial_model({0.0}, 1.0);
    bool path_ok = true;
    for (int i = 0; i < 1000 && path_ok; ++i) {
        RngStream rng(601, {3, static_cast<std::uint64_t>(i), StreamRole::coupled});
        CouplingTrace trace;
        CoupledSample s = coupled_sample(bm, cubic_policy(), sched, 3, observable_identity(),
                                         rng, &trace);
        if (std::fabs((s.fine_value - s.coarse_value) - trace.preoverlap_noise[0]) > 1e-12)
            path_ok = false;
    }

    report(6, "telescoping + coupling identity", means_ok && path_ok,
           "worst |z|=" + fmt(worst_z) + " (<= 4), pathwise identity " +
               (path_ok ? "holds" : "violated"));
}

// 7. Second moment is uniform in time; uniform-step EM is not.
void criterion_7() {
    SdeModel m = builtin_cubic_langevin();
    const double truth = invariant_expectation_1d(m, observable_x2());
    TimestepPolicy p = cubic_policy(1.0 / 16);
    std::vector<double> means, ses;
    bool within5 = true;
    for (double t : {5.0, 10.0, 20.0, 50.0, 100.0}) {
        auto [mean, se] = estimate_moment(m, p, t, 2.0, 10000, 45);
        means.push_back(mean);
        ses.push_back(se);
        if (std::fabs(mean - truth) / truth > 0.05) within5 = false;
    }
    bool mutual3 = true;
    for (std::size_t i = 0; i < means.size(); ++i)
        for (std::size_t j = i + 1; j < means.size(); ++j) {
            double se = std::sqrt(ses[i] * ses[i] + ses[j] * ses[j]);
            if (std::fabs(means[i] - means[j]) > 3.0 * se) mutual3 = false;
        }

    int blowups = 0;
    for (int i = 0; i < 100; ++i) {
        RngStream rng(703, {0, static_cast<std::uint64_t>(i), StreamRole::single});
        try {
            simulate_path(m, constant_policy(1.0), 20.0, rng);
        } catch (const NonFiniteState&) {
            ++blowups;
        }
    }
    report(7, "uniform-in-T stability", within5 && mutual3 && blowups >= 50,
           "adaptive within 5% of " + fmt(truth) + ": " + (within5 ? "yes" : "no") +
               ", mutual 3se: " + (mutual3 ? "yes" : "no") + ", uniform-step blowups=" +
               std::to_string(blowups) + "/100 (>= 50)");
}

// 8. Contraction rates: cubic slope <= -1, OU control equals -1.
void criterion_8() {
    std::vector<double> horizons{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    FitResult cubic = estimate_contraction(builtin_cubic_langevin(), cubic_policy(1.0 / 16),
                                           {2.0}, {-2.0}, horizons, 2000, 801);
    FitResult ou = estimate_contraction(builtin_ou(), cubic_policy(1.0 / 64), {1.0}, {-1.0},
                                        horizons, 2000, 803);
    report(8, "contraction rates", cubic.slope <= -1.0 && std::fabs(ou.slope + 1.0) <= 0.02,
           "cubic slope=" + fmt(cubic.slope) + " (<= -1), ou slope=" + fmt(ou.slope) +
               " (-1 +- 0.02)");
}

// 9. Mean step count linear in the horizon and in the inverse scale.
void criterion_9() {
    SdeModel m = builtin_cubic_langevin();
    auto mean_steps = [&](double T, double delta, std::uint64_t seed) {
        double total = 0;
        const int n = 1000;
        TimestepPolicy p = cubic_policy(delta);
        for (int i = 0; i < n; ++i) {
            RngStream rng(seed, {0, static_cast<std::uint64_t>(i), StreamRole::single});
            total += static_cast<double>(simulate_path(m, p, T, rng).steps_taken);
        }
        return total / n;
    };
    double base = mean_steps(10.0, 1.0 / 8, 901);
    double ratio_T = mean_steps(20.0, 1.0 / 8, 902) / base;
    double ratio_d = mean_steps(10.0, 1.0 / 16, 903) / base;
    report(9, "step-count scaling",
           std::fabs(ratio_T - 2.0) <= 0.2 && std::fabs(ratio_d - 2.0) <= 0.2,
           "T-doubling ratio=" + fmt(ratio_T) + ", delta-halving ratio=" + fmt(ratio_d) +
               " (both 2 +- 0.2)");
}

// 10. Validator CLI exit-code contract.
void criterion_10() {
    int ok_rc = run_cli("check --model cubic --alpha 0.5 --beta 1 --lambda 1");
    int fail_rc = run_cli("check --model cubic --policy constant --h-const 1");
    int usage_rc = run_cli("check --no-such-flag");
    report(10, "validator exit codes", ok_rc == 0 && fail_rc == 1 && usage_rc == 2,
           "pass-config rc=" + std::to_string(ok_rc) + " (0), constant-step rc=" +
               std::to_string(fail_rc) + " (1), bad-flag rc=" + std::to_string(usage_rc) +
               " (2)");
}

// 11. Reproduction pipeline is byte-identical across reruns with threads.
void criterion_11() {
    const std::string base = "acceptance_repro";
    const std::string args =
        " --seed 42 --level-samples 2000 --weak-paths 5000 --table-levels 5 "
        "--eps 2e-2 --eps 1e-2";
    run_cli("--threads 4 reproduce --out-dir " + base + "_a" + args);
    run_cli("--threads 4 reproduce --out-dir " + base + "_b" + args);
    std::vector<std::string> files{"level_table.csv", "weak_error.csv", "cost_curve.csv",
                                   "mlmc_eps0.02.csv", "mlmc_eps0.01.csv", "summary.json"};
    bool identical = true;
    std::string bad;
    for (const std::string& f : files) {
        std::string a = slurp(base + "_a/" + f);
        std::string b = slurp(base + "_b/" + f);
        if (a.empty() || a != b) {
            identical = false;
            bad = f;
        }
    }
    report(11, "reproduction determinism", identical,
           identical ? "all outputs byte-identical across 2 runs with 4 threads"
                     : "mismatch or missing: " + bad);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <cli-path> [fast|all|<criterion>...]\n";
        return 2;
    }
    g_cli = argv[1];
    std::set<int> wanted;
    bool fast = false, all = false;
    for (int i = 2; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "fast")
            fast = true;
        else if (a == "all")
            all = true;
        else
            wanted.insert(std::atoi(a.c_str()));
    }
    if (!fast && !all && wanted.empty()) fast = true;
    auto selected = [&](int c) {
        if (all) return true;
        if (wanted.count(c)) return true;
        return fast && c != 4;  // criterion 4 is the slow tier
    };

    if (selected(1)) criterion_1();
    if (selected(2)) criterion_2();
    if (selected(3)) criterion_3();
    if (selected(4)) criterion_4();
    if (selected(5)) criterion_5();
    if (selected(6)) criterion_6();
    if (selected(7)) criterion_7();
    if (selected(8)) criterion_8();
    if (selected(9)) criterion_9();
    if (selected(10)) criterion_10();
    if (selected(11)) criterion_11();

    if (g_failures == 0) {
        std::printf("all selected criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
