// Command-line front end: assumption checks, path simulation, coupled
// sampling, the multilevel driver, and the full benchmark reproduction
// pipeline. All file outputs are written atomically (temp + rename) and in
// locale-independent full-precision text so reruns are byte-comparable.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amlmc/analysis.hpp"
#include "amlmc/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace amlmc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

struct ModelOpts {
    std::string name = "cubic";
    std::vector<double> poly;
    double sigma = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", name, "Built-in model name (cubic|ou|poly)");
        cmd->add_option("--poly", poly,
                        "Drift polynomial coefficients c0 c1 ... (with --model poly)");
        cmd->add_option("--sigma", sigma, "Constant diffusion value (with --model poly)");
    }

    SdeModel build() const {
        if (name == "cubic") return builtin_cubic_langevin();
        if (name == "ou") return builtin_ou();
        if (name == "poly") {
            if (poly.empty()) throw CLI::ValidationError("--poly", "needs coefficients");
            return polynomial_model(poly, sigma);
        }
        throw CLI::ValidationError("--model", "unknown model '" + name + "'");
    }
};

struct PolicyOpts {
    std::string h = "auto";  // auto|cubic|constant
    double h_const = 1.0;
    double h_max = 1.0;
    int M = 2;
    double delta = 1.0;

    void attach(CLI::App* cmd, bool with_delta = true) {
        cmd->add_option("--policy", h, "Timestep policy: auto|cubic|constant");
        cmd->add_option("--h-const", h_const, "Step for the constant policy");
        cmd->add_option("--h-max", h_max, "Timestep upper bound");
        cmd->add_option("--M", M, "Refinement factor")->check(CLI::Range(2, 64));
        if (with_delta) cmd->add_option("--delta", delta, "Level scale delta");
    }

    TimestepPolicy build(const SdeModel& model) const {
        TimestepPolicy p;
        if (h == "cubic")
            p = cubic_policy(delta, M);
        else if (h == "constant")
            p = constant_policy(h_const, delta, M);
        else if (h == "auto")
            p = drift_ratio_policy(model, delta, M);
        else
            throw CLI::ValidationError("--h", "unknown policy '" + h + "'");
        if (h != "constant") p.h_max = h_max;
        return p;
    }
};

Observable make_phi(const std::string& phi) {
    if (phi == "abs") return observable_abs();
    if (phi == "identity") return observable_identity();
    if (phi == "x2") return observable_x2();
    throw CLI::ValidationError("--phi", "unknown observable '" + phi + "'");
}

ScheduleMode parse_mode(const std::string& mode) {
    if (mode == "general") return ScheduleMode::general;
    if (mode == "langevin") return ScheduleMode::langevin;
    throw CLI::ValidationError("--mode", "expected general or langevin");
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("AMLMC_OUT_DIR")) return env;
    return "amlmc_out";
}

void setup_config(CLI::App* cmd) {
    cmd->set_config("--config", "", "Flat key=value config file");
    cmd->allow_config_extras(CLI::config_extras_mode::error);
}

std::string level_table_csv(const std::vector<LevelStats>& levels) {
    std::ostringstream os;
    os << "level,T,N,mean,var,cost\n";
    for (const auto& s : levels)
        os << s.level << ',' << fmt(s.horizon) << ',' << s.samples << ','
           << fmt(s.mean_correction) << ',' << fmt(s.var_correction) << ','
           << fmt(s.mean_cost) << '\n';
    return os.str();
}

json mlmc_summary_json(const MlmcResult& res, double epsilon) {
    json j;
    j["epsilon"] = epsilon;
    j["estimate"] = res.estimate;
    j["total_cost"] = res.total_cost;
    j["statistical_error"] = res.statistical_error;
    j["bias_estimate"] = res.bias_estimate;
    j["levels"] = json::array();
    for (const auto& s : res.levels)
        j["levels"].push_back({{"level", s.level},
                               {"T", s.horizon},
                               {"N", s.samples},
                               {"mean", s.mean_correction},
                               {"var", s.var_correction},
                               {"cost", s.mean_cost}});
    return j;
}

// ---- subcommand bodies ----

int cmd_check(const ModelOpts& mo, const PolicyOpts& po, double alpha, double beta, double lambda,
              double p_star, double gamma, double mu, double q, double xi, double zeta,
              const GridSpec& grid) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    bool all_ok = true;
    auto report = [&all_ok](const std::string& name, const CheckReport& rep) {
        all_ok = all_ok && rep.satisfied;
        std::cout << (rep.satisfied ? "[PASS] " : "[FAIL] ") << name
                  << "  worst_margin=" << fmt(rep.worst_margin) << " at x=(";
        for (double v : rep.worst_point) std::cout << fmt(v) << ' ';
        std::cout << ") over " << rep.points_checked << " points\n";
    };
    report("dissipativity", check_dissipativity(model, alpha, beta, grid));
    if (model.has_jacobian()) {
        report("contractivity", check_contractivity(model, lambda, p_star, grid));
        report("enhanced_lipschitz", check_enhanced_lipschitz(model, grid, gamma, mu, q));
    } else {
        std::cout << "[SKIP] contractivity / enhanced_lipschitz (no Jacobian)\n";
    }
    report("timestep_condition", check_timestep_condition(model, policy, alpha, beta, grid));
    report("timestep_lower_bound", check_lower_bound(policy, xi, zeta, q, grid));
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const ModelOpts& mo, const PolicyOpts& po, double horizon, std::int64_t paths,
                 std::uint64_t seed, const fs::path& out) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    std::vector<PathResult> results(paths);
    parallel_for(paths, [&](std::int64_t i) {
        RngStream rng(seed, {0, static_cast<std::uint64_t>(i), StreamRole::single});
        results[i] = simulate_path(model, policy, horizon, rng);
    });
    std::ostringstream os;
    os << "path_id,terminal,steps,max_norm\n";
    for (std::int64_t i = 0; i < paths; ++i)
        os << i << ',' << fmt(results[i].terminal_state[0]) << ',' << results[i].steps_taken
           << ',' << fmt(results[i].max_norm) << '\n';
    atomic_write(out, os.str());
    std::cout << "wrote " << out.string() << " (" << paths << " paths)\n";
    return kExitOk;
}

int cmd_couple(const ModelOpts& mo, const PolicyOpts& po, int level, std::int64_t n_samples,
               std::uint64_t seed, const std::string& mode, double lambda, const fs::path& out) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    LevelSchedule schedule =
        make_schedule(std::max(level, 1), po.M, lambda, parse_mode(mode));
    std::vector<CoupledSample> results(n_samples);
    parallel_for(n_samples, [&](std::int64_t i) {
        RngStream rng(seed, {static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(i),
                             StreamRole::coupled});
        results[i] = level == 0
                         ? level0_sample(model, policy, schedule, observable_abs(), rng)
                         : coupled_sample(model, policy, schedule, level, observable_abs(), rng);
    });
    std::ostringstream os;
    os << "sample_id,fine,coarse,diff,fine_steps,coarse_steps\n";
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const auto& s = results[i];
        os << i << ',' << fmt(s.fine_value) << ',' << fmt(s.coarse_value) << ','
           << fmt(s.fine_value - s.coarse_value) << ',' << s.fine_steps << ',' << s.coarse_steps
           << '\n';
    }
    atomic_write(out, os.str());
    std::cout << "wrote " << out.string() << " (" << n_samples << " samples)\n";
    return kExitOk;
}

int cmd_mlmc(const ModelOpts& mo, const PolicyOpts& po, const std::string& phi,
             std::vector<double> eps_list, const std::string& mode, std::uint64_t seed,
             std::vector<double> split, const fs::path& out_dir, int max_level,
             std::int64_t pilot, double mu_hat, int bias_order) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    if (split.size() != 3 || std::fabs(split[0] + split[1] + split[2] - 1.0) > 1e-12)
        throw CLI::ValidationError("--split", "needs three positive shares summing to 1");
    for (double eps : eps_list) {
        MlmcConfig cfg;
        cfg.epsilon = eps;
        cfg.refinement_factor = po.M;
        cfg.mode = parse_mode(mode);
        cfg.lambda = model.constants.lambda;
        cfg.max_level = max_level;
        cfg.min_samples_per_level = pilot;
        cfg.error_split = {split[0], split[1], split[2]};
        cfg.mu_hat = mu_hat;
        cfg.bias_order = bias_order;
        MlmcResult res = run_mlmc(model, policy, make_phi(phi), cfg, seed);
        std::ostringstream tag;
        tag << "eps" << eps;
        atomic_write(out_dir / ("mlmc_" + tag.str() + ".json"),
                     mlmc_summary_json(res, eps).dump(2) + "\n");
        atomic_write(out_dir / ("mlmc_" + tag.str() + ".csv"), level_table_csv(res.levels));
        std::cout << "eps=" << fmt(eps) << " estimate=" << fmt(res.estimate)
                  << " cost=" << fmt(res.total_cost) << " levels=" << res.levels.size() << '\n';
    }
    return kExitOk;
}

int cmd_oracle(const ModelOpts& mo, const std::string& phi, double radius, int points) {
    QuadratureSpec spec;
    spec.truncation_radius = radius;
    spec.points = points;
    std::cout << fmt(invariant_expectation_1d(mo.build(), make_phi(phi), spec)) << '\n';
    return kExitOk;
}

int cmd_moments(const ModelOpts& mo, const PolicyOpts& po, std::vector<double> horizons, double p,
                std::int64_t paths, std::uint64_t seed, const fs::path& out) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    std::ostringstream os;
    os << "t,mean,std_error\n";
    for (double t : horizons) {
        auto [mean, se] = estimate_moment(model, policy, t, p, paths, seed);
        os << fmt(t) << ',' << fmt(mean) << ',' << fmt(se) << '\n';
    }
    atomic_write(out, os.str());
    std::cout << "wrote " << out.string() << '\n';
    return kExitOk;
}

int cmd_contraction(const ModelOpts& mo, const PolicyOpts& po, double x0, double y0,
                    std::vector<double> horizons, std::int64_t paths, std::uint64_t seed,
                    const fs::path& out) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    auto curve = contraction_curve(model, policy, {x0}, {y0}, horizons, paths, seed);
    FitResult fit = estimate_contraction(model, policy, {x0}, {y0}, horizons, paths, seed);
    std::ostringstream os;
    os << "t,mean_distance\n";
    for (auto [t, v] : curve) os << fmt(t) << ',' << fmt(v) << '\n';
    atomic_write(out, os.str());
    std::cout << "slope=" << fmt(fit.slope) << " r2=" << fmt(fit.r_squared) << '\n';
    return kExitOk;
}

std::vector<LevelStats> run_level_table(const SdeModel& model, const TimestepPolicy& policy,
                                        const LevelSchedule& schedule, int max_level,
                                        std::int64_t n_samples, std::uint64_t seed) {
    std::vector<LevelStats> table;
    for (int level = 0; level <= max_level; ++level) {
        std::vector<double> diffs(n_samples);
        std::vector<double> costs(n_samples);
        parallel_for(n_samples, [&](std::int64_t i) {
            RngStream rng(seed, {static_cast<std::uint64_t>(level),
                                 static_cast<std::uint64_t>(i), StreamRole::coupled});
            CoupledSample s =
                level == 0 ? level0_sample(model, policy, schedule, observable_abs(), rng)
                           : coupled_sample(model, policy, schedule, level, observable_abs(), rng);
            diffs[i] = s.fine_value - s.coarse_value;
            costs[i] = static_cast<double>(s.fine_steps + s.coarse_steps);
        });
        LevelStats st;
        st.level = level;
        st.horizon = schedule.horizons[level];
        st.samples = n_samples;
        double sum = 0, cost = 0;
        for (double v : diffs) sum += v;
        for (double c : costs) cost += c;
        st.mean_correction = sum / static_cast<double>(n_samples);
        st.mean_cost = cost / static_cast<double>(n_samples);
        double ss = 0;
        for (double v : diffs) ss += (v - st.mean_correction) * (v - st.mean_correction);
        st.var_correction = ss / static_cast<double>(n_samples - 1);
        table.push_back(st);
    }
    return table;
}

int cmd_levels(const ModelOpts& mo, const PolicyOpts& po, int max_level, std::int64_t n_samples,
               std::uint64_t seed, const std::string& mode, double lambda, const fs::path& out) {
    SdeModel model = mo.build();
    TimestepPolicy policy = po.build(model);
    LevelSchedule schedule = make_schedule(max_level, po.M, lambda, parse_mode(mode));
    auto table = run_level_table(model, policy, schedule, max_level, n_samples, seed);
    atomic_write(out, level_table_csv(table));
    std::cout << "wrote " << out.string() << '\n';
    return kExitOk;
}

int cmd_reproduce(std::uint64_t seed, const fs::path& out_dir, std::int64_t level_samples,
                  std::int64_t weak_paths, std::vector<double> eps_list, int table_levels) {
    SdeModel model = builtin_cubic_langevin();
    TimestepPolicy policy = cubic_policy();
    Observable phi = observable_abs();
    json summary;
    bool all_ok = true;
    auto record = [&](const std::string& name, bool ok, json detail) {
        detail["pass"] = ok;
        summary["checks"][name] = detail;
        all_ok = all_ok && ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
    };

    // Stationary-density quadrature benchmark.
    const double oracle = invariant_expectation_1d(model, phi);
    record("oracle_benchmark", std::fabs(oracle - 0.44115) <= 1e-4,
           {{"value", oracle}, {"reference", 0.44115}, {"tolerance", 1e-4}});

    // Per-level correction means/variances (variance-decay panels).
    LevelSchedule schedule = make_schedule(table_levels, 2, 1.0, ScheduleMode::langevin);
    auto table = run_level_table(model, policy, schedule, table_levels, level_samples, seed);
    atomic_write(out_dir / "level_table.csv", level_table_csv(table));
    std::vector<std::pair<int, double>> vars;
    bool decreasing = true;
    for (const auto& s : table) {
        vars.emplace_back(s.level, s.var_correction);
        if (s.level > 0 && s.var_correction >= table[s.level - 1].var_correction)
            decreasing = false;
    }
    FitResult vfit = fit_order(vars, {3, std::min(7, table_levels)}, 2);
    record("variance_decay", std::fabs(vfit.slope + 2.0) <= 0.4 && decreasing,
           {{"slope", vfit.slope}, {"expected", -2.0}, {"tolerance", 0.4},
            {"strictly_decreasing", decreasing}});

    // Weak-error convergence panel.
    const std::pair<int, int> weak_range{2, std::min(6, table_levels)};
    auto weak = weak_error_curve(model, policy, phi, schedule, weak_range, weak_paths, seed);
    {
        std::ostringstream os;
        os << "level,abs_error\n";
        for (auto [l, e] : weak) os << l << ',' << fmt(e) << '\n';
        atomic_write(out_dir / "weak_error.csv", os.str());
    }
    FitResult wfit = fit_order(weak, weak_range, 2);
    record("weak_order", std::fabs(wfit.slope + 1.0) <= 0.3,
           {{"slope", wfit.slope}, {"expected", -1.0}, {"tolerance", 0.3}});

    // Full driver across accuracies: N_l tables and the eps^2-cost curve.
    std::ostringstream cost_csv;
    cost_csv << "eps,estimate,total_cost,eps2_cost\n";
    double c_min = 1e300, c_max = 0.0;
    bool est_ok = true;
    for (double eps : eps_list) {
        MlmcConfig cfg;
        cfg.epsilon = eps;
        cfg.lambda = model.constants.lambda;
        MlmcResult res = run_mlmc(model, policy, phi, cfg, seed);
        std::ostringstream tag;
        tag << "eps" << eps;
        atomic_write(out_dir / ("mlmc_" + tag.str() + ".csv"), level_table_csv(res.levels));
        atomic_write(out_dir / ("mlmc_" + tag.str() + ".json"),
                     mlmc_summary_json(res, eps).dump(2) + "\n");
        const double e2c = eps * eps * res.total_cost;
        cost_csv << fmt(eps) << ',' << fmt(res.estimate) << ',' << fmt(res.total_cost) << ','
                 << fmt(e2c) << '\n';
        c_min = std::min(c_min, e2c);
        c_max = std::max(c_max, e2c);
        est_ok = est_ok && std::fabs(res.estimate - oracle) <= 3.0 * eps;
    }
    atomic_write(out_dir / "cost_curve.csv", cost_csv.str());
    record("cost_scaling", c_max / c_min < 3.0,
           {{"max_over_min", c_max / c_min}, {"threshold", 3.0}});
    record("mlmc_estimates_within_3eps", est_ok, {{"reference", oracle}});

    summary["oracle"] = oracle;
    summary["seed"] = seed;
    atomic_write(out_dir / "summary.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (out_dir / "summary.json").string() << '\n';
    return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive Euler-Maruyama and coupled-horizon multilevel Monte Carlo "
                 "for ergodic SDEs"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = hardware default)");
    app.fallthrough();

    ModelOpts mo_check, mo_sim, mo_couple, mo_mlmc, mo_oracle, mo_mom, mo_contr, mo_levels;
    PolicyOpts po_check, po_sim, po_couple, po_mlmc, po_mom, po_contr, po_levels;

    // check
    auto* check = app.add_subcommand("check", "Run the assumption validators");
    mo_check.attach(check);
    po_check.attach(check, false);
    double alpha = 0.5, beta = 1.0, lambda = 1.0, p_star = 2.0;
    double gamma = 1.5, mu = 1.0, q = 2.0, xi = 1.0, zeta = 1.0;
    GridSpec grid;
    check->add_option("--alpha", alpha);
    check->add_option("--beta", beta);
    check->add_option("--lambda", lambda);
    check->add_option("--p-star", p_star);
    check->add_option("--gamma", gamma);
    check->add_option("--mu", mu);
    check->add_option("--q", q);
    check->add_option("--xi", xi);
    check->add_option("--zeta", zeta);
    check->add_option("--radius", grid.radius);
    check->add_option("--points", grid.points_per_axis);
    setup_config(check);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Independent adaptive paths");
    mo_sim.attach(sim);
    po_sim.attach(sim);
    double horizon = 10.0;
    std::int64_t paths = 1000;
    std::uint64_t seed = 1;
    std::string out = "simulate.csv";
    sim->add_option("--horizon", horizon);
    sim->add_option("--paths", paths);
    sim->add_option("--seed", seed);
    sim->add_option("--out", out);
    setup_config(sim);

    // couple
    auto* couple = app.add_subcommand("couple", "Coupled fine/coarse samples on one level");
    mo_couple.attach(couple);
    po_couple.attach(couple, false);
    int level = 1;
    std::int64_t n_samples = 10000;
    std::uint64_t seed_c = 1;
    std::string mode_c = "langevin", out_c = "couple.csv";
    double lambda_c = 1.0;
    couple->add_option("--level", level);
    couple->add_option("--samples", n_samples);
    couple->add_option("--seed", seed_c);
    couple->add_option("--schedule-mode", mode_c);
    couple->add_option("--lambda", lambda_c);
    couple->add_option("--out", out_c);
    setup_config(couple);

    // mlmc
    auto* mlmc = app.add_subcommand("mlmc", "Full multilevel driver");
    mo_mlmc.attach(mlmc);
    po_mlmc.attach(mlmc, false);
    std::string phi = "abs", mode_m = "langevin";
    std::vector<double> eps_list{5e-3};
    std::vector<double> split{0.5, 0.25, 0.25};
    std::uint64_t seed_m = 1;
    std::string out_dir_m = default_out_dir().string();
    int max_level = 20, bias_order = 1;
    std::int64_t pilot = 100;
    double mu_hat = 1.0;
    mlmc->add_option("--phi", phi, "Observable: abs|identity|x2");
    mlmc->add_option("--eps", eps_list, "Target RMSE (repeatable)");
    mlmc->add_option("--mode", mode_m);
    mlmc->add_option("--seed", seed_m);
    mlmc->add_option("--split", split, "variance/bias/truncation error shares");
    mlmc->add_option("--out-dir", out_dir_m);
    mlmc->add_option("--max-level", max_level);
    mlmc->add_option("--pilot", pilot);
    mlmc->add_option("--mu-hat", mu_hat);
    mlmc->add_option("--bias-order", bias_order);
    setup_config(mlmc);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "1-D stationary-density quadrature");
    mo_oracle.attach(oracle);
    std::string phi_o = "abs";
    double radius = 8.0;
    int points = 1 << 14;
    oracle->add_option("--phi", phi_o);
    oracle->add_option("--radius", radius);
    oracle->add_option("--points", points);
    setup_config(oracle);

    // moments
    auto* moments = app.add_subcommand("moments", "Monte Carlo moment estimates");
    mo_mom.attach(moments);
    po_mom.attach(moments);
    std::vector<double> times{5, 10, 20};
    double p_mom = 2.0;
    std::int64_t paths_mom = 10000;
    std::uint64_t seed_mom = 1;
    std::string out_mom = "moments.csv";
    moments->add_option("--t", times, "Horizons");
    moments->add_option("--p", p_mom);
    moments->add_option("--paths", paths_mom);
    moments->add_option("--seed", seed_mom);
    moments->add_option("--out", out_mom);
    setup_config(moments);

    // contraction
    auto* contr = app.add_subcommand("contraction", "Coupled-pair contraction estimate");
    mo_contr.attach(contr);
    po_contr.attach(contr);
    double x0 = 2.0, y0 = -2.0;
    std::vector<double> horizons{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    std::int64_t paths_ct = 1000;
    std::uint64_t seed_ct = 1;
    std::string out_ct = "contraction.csv";
    contr->add_option("--x0", x0);
    contr->add_option("--y0", y0);
    contr->add_option("--horizons", horizons);
    contr->add_option("--paths", paths_ct);
    contr->add_option("--seed", seed_ct);
    contr->add_option("--out", out_ct);
    setup_config(contr);

    // levels
    auto* levels = app.add_subcommand("levels", "Per-level correction statistics");
    mo_levels.attach(levels);
    po_levels.attach(levels, false);
    int max_level_tab = 7;
    std::int64_t samples_tab = 20000;
    std::uint64_t seed_tab = 1;
    std::string mode_tab = "langevin", out_tab = "levels.csv";
    double lambda_tab = 1.0;
    levels->add_option("--levels", max_level_tab, "Highest level");
    levels->add_option("--samples", samples_tab);
    levels->add_option("--seed", seed_tab);
    levels->add_option("--mode", mode_tab);
    levels->add_option("--lambda", lambda_tab);
    levels->add_option("--out", out_tab);
    setup_config(levels);

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "Benchmark reproduction pipeline");
    std::uint64_t seed_r = 1;
    std::string out_dir_r = default_out_dir().string();
    std::int64_t level_samples = 20000, weak_paths = 100000;
    std::vector<double> eps_r{2e-2, 1e-2, 5e-3, 2.5e-3};
    int table_levels = 7;
    repro->add_option("--seed", seed_r);
    repro->add_option("--out-dir", out_dir_r);
    repro->add_option("--level-samples", level_samples);
    repro->add_option("--weak-paths", weak_paths);
    repro->add_option("--eps", eps_r);
    repro->add_option("--table-levels", table_levels);
    setup_config(repro);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }
    set_worker_count(threads);

    try {
        if (check->parsed())
            return cmd_check(mo_check, po_check, alpha, beta, lambda, p_star, gamma, mu, q, xi,
                             zeta, grid);
        if (sim->parsed()) return cmd_simulate(mo_sim, po_sim, horizon, paths, seed, out);
        if (couple->parsed())
            return cmd_couple(mo_couple, po_couple, level, n_samples, seed_c, mode_c, lambda_c,
                              out_c);
        if (mlmc->parsed())
            return cmd_mlmc(mo_mlmc, po_mlmc, phi, eps_list, mode_m, seed_m, split, out_dir_m,
                            max_level, pilot, mu_hat, bias_order);
        if (oracle->parsed()) return cmd_oracle(mo_oracle, phi_o, radius, points);
        if (moments->parsed())
            return cmd_moments(mo_mom, po_mom, times, p_mom, paths_mom, seed_mom, out_mom);
        if (contr->parsed())
            return cmd_contraction(mo_contr, po_contr, x0, y0, horizons, paths_ct, seed_ct,
                                   out_ct);
        if (levels->parsed())
            return cmd_levels(mo_levels, po_levels, max_level_tab, samples_tab, seed_tab,
                              mode_tab, lambda_tab, out_tab);
        if (repro->parsed())
            return cmd_reproduce(seed_r, out_dir_r, level_samples, weak_paths, eps_r,
                                 table_levels);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}
