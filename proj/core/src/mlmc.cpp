#include "amlmc/mlmc.hpp"

#include <algorithm>
#include <cmath>

#include "amlmc/parallel.hpp"

namespace amlmc {

double t_schedule(int level, int M, double lambda, ScheduleMode mode) {
    const double base = (level + 1) * std::log(static_cast<double>(M)) / lambda;
    return mode == ScheduleMode::langevin ? base : 0.5 * base;
}

LevelSchedule make_schedule(int max_level, int M, double lambda, ScheduleMode mode) {
    LevelSchedule s;
    s.refinement_factor = M;
    s.lambda = lambda;
    s.mode = mode;
    s.horizons.reserve(max_level + 1);
    for (int l = 0; l <= max_level; ++l) s.horizons.push_back(t_schedule(l, M, lambda, mode));
    return s;
}

int theoretical_L(double epsilon, int M, std::pair<double, double> constants) {
    const double log_m = std::log(static_cast<double>(M));
    const double additive = std::log(6.0 * std::max(constants.first * constants.first,
                                                    constants.second));
    return static_cast<int>(std::floor(2.0 * std::fabs(std::log(epsilon)) / log_m +
                                       additive / log_m)) + 1;
}

std::vector<std::int64_t> optimal_samples(const std::vector<LevelStats>& level_stats,
                                          double epsilon, double variance_share) {
    double sum_sqrt_vc = 0.0;
    for (const auto& s : level_stats) sum_sqrt_vc += std::sqrt(s.var_correction * s.mean_cost);
    std::vector<std::int64_t> n;
    n.reserve(level_stats.size());
    if (sum_sqrt_vc == 0.0) {
        // Degenerate: every level has zero variance; one sample suffices.
        n.assign(level_stats.size(), 1);
        return n;
    }
    const double budget = variance_share * epsilon * epsilon;
    for (const auto& s : level_stats) {
        const double cost = std::max(s.mean_cost, 1.0);
        const double ideal = std::sqrt(s.var_correction / cost) * sum_sqrt_vc / budget;
        n.push_back(static_cast<std::int64_t>(std::ceil(ideal)));
    }
    return n;
}

namespace {

struct LevelSamples {
    std::vector<double> diffs;  // fine - coarse per sample (fine only at level 0)
    std::vector<double> costs;  // fine + coarse steps per sample
};

// Index-ordered aggregation keeps results independent of the thread count.
LevelStats aggregate(int level, double horizon, const LevelSamples& s) {
    LevelStats st;
    st.level = level;
    st.horizon = horizon;
    st.samples = static_cast<std::int64_t>(s.diffs.size());
    double sum = 0.0, cost = 0.0;
    for (double v : s.diffs) sum += v;
    for (double c : s.costs) cost += c;
    st.mean_correction = st.samples ? sum / st.samples : 0.0;
    st.mean_cost = st.samples ? cost / st.samples : 0.0;
    if (st.samples >= 2) {
        double ss = 0.0;
        for (double v : s.diffs) {
            const double e = v - st.mean_correction;
            ss += e * e;
        }
        st.var_correction = ss / (st.samples - 1);
    }
    return st;
}

}  // namespace

MlmcResult run_mlmc(const SdeModel& model, const TimestepPolicy& policy,
                    const Observable& observable, const MlmcConfig& config, std::uint64_t seed) {
    const int M = config.refinement_factor;
    const LevelSchedule schedule =
        make_schedule(config.max_level, M, config.lambda, config.mode);
    const double var_share = config.error_split[0];
    const double bias_share = config.error_split[1];
    const double trunc_share = config.error_split[2];
    const double m_r = std::pow(M, config.bias_order);

    std::vector<LevelSamples> samples;

    auto ensure_samples = [&](int level, std::int64_t target) {
        if (static_cast<std::size_t>(level) >= samples.size()) samples.resize(level + 1);
        LevelSamples& ls = samples[level];
        const std::int64_t have = static_cast<std::int64_t>(ls.diffs.size());
        if (target <= have) return;
        ls.diffs.resize(target);
        ls.costs.resize(target);
        parallel_for(target - have, [&](std::int64_t k) {
            const std::int64_t idx = have + k;
            RngStream rng(seed, {static_cast<std::uint64_t>(level),
                                 static_cast<std::uint64_t>(idx), StreamRole::coupled});
            CoupledSample cs =
                level == 0 ? level0_sample(model, policy, schedule, observable, rng)
                           : coupled_sample(model, policy, schedule, level, observable, rng);
            ls.diffs[idx] = cs.fine_value - cs.coarse_value;
            ls.costs[idx] = static_cast<double>(cs.fine_steps + cs.coarse_steps);
        });
    };

    int L = 2;
    if (L > config.max_level) throw MaxLevelExceeded("max_level must be at least 2");
    for (int l = 0; l <= L; ++l) ensure_samples(l, config.min_samples_per_level);

    std::vector<LevelStats> stats;
    auto recompute_stats = [&] {
        stats.clear();
        for (int l = 0; l <= L; ++l) {
            LevelStats st = aggregate(l, schedule.horizons[l], samples[l]);
            if (st.samples < 2 && l > 0 && !stats.empty())
                st.var_correction = stats.back().var_correction / std::pow(M, 2 * config.bias_order);
            stats.push_back(st);
        }
    };

    const double trunc_horizon =
        std::log(config.mu_hat / (std::sqrt(trunc_share) * config.epsilon)) / config.lambda;

    double bias = 0.0;
    while (true) {
        recompute_stats();

        std::vector<std::int64_t> target = optimal_samples(stats, config.epsilon, var_share);
        bool extended = false;
        for (int l = 0; l <= L; ++l) {
            const std::int64_t want =
                std::max<std::int64_t>(target[l], config.min_samples_per_level);
            if (want > stats[l].samples) {
                ensure_samples(l, want);
                extended = true;
            }
        }
        if (extended) continue;

        bias = std::max(std::fabs(stats[L].mean_correction),
                        std::fabs(stats[L - 1].mean_correction) / m_r) /
               (m_r - 1.0);
        const bool all_zero = [&] {
            if (stats[0].var_correction != 0.0) return false;
            for (int l = 1; l <= L; ++l)
                if (stats[l].var_correction != 0.0 || stats[l].mean_correction != 0.0)
                    return false;
            return true;
        }();
        const bool bias_ok = bias <= std::sqrt(bias_share) * config.epsilon;
        const bool trunc_ok = schedule.horizons[L] >= trunc_horizon;
        if (all_zero || (bias_ok && trunc_ok)) break;
        if (L == config.max_level)
            throw MaxLevelExceeded("MLMC did not converge by level " +
                                   std::to_string(config.max_level));
        ++L;
        ensure_samples(L, config.min_samples_per_level);
    }

    MlmcResult res;
    res.levels = stats;
    res.bias_estimate = bias;
    double var_sum = 0.0;
    for (const auto& st : stats) {
        res.estimate += st.mean_correction;
        res.total_cost += static_cast<double>(st.samples) * st.mean_cost;
        if (st.samples > 0) var_sum += st.var_correction / static_cast<double>(st.samples);
    }
    res.statistical_error = std::sqrt(var_sum);
    return res;
}

}  // namespace amlmc
