#pragma once

#include <array>
#include <cstdint>

#include "amlmc/coupling.hpp"

namespace amlmc {

/// Driver configuration. error_split gives the shares of epsilon^2 assigned
/// to (statistical variance, discretization bias, horizon-truncation bias).
struct MlmcConfig {
    double epsilon = 1e-2;
    int refinement_factor = 2;  // M
    ScheduleMode mode = ScheduleMode::langevin;
    double lambda = 1.0;
    int max_level = 20;
    std::int64_t min_samples_per_level = 100;  // pilot size
    std::array<double, 3> error_split{0.5, 0.25, 0.25};
    // Decay order of the correction means used in the bias stopping proxy.
    // The scheme shows first-order weak convergence, so 1 is the default.
    int bias_order = 1;
    // Ergodicity prefactor surrogate for the truncation gate mu * e^{-lambda T}.
    double mu_hat = 1.0;
};

/// Per-level aggregates of the correction samples.
struct LevelStats {
    int level = 0;
    double horizon = 0.0;       // T_l
    std::int64_t samples = 0;   // N_l
    double mean_correction = 0.0;
    double var_correction = 0.0;  // V_l (unbiased sample variance)
    double mean_cost = 0.0;       // average fine+coarse steps per sample
};

struct MlmcResult {
    double estimate = 0.0;  // telescoped sum of mean corrections
    std::vector<LevelStats> levels;
    double total_cost = 0.0;         // sum N_l * C_l
    double statistical_error = 0.0;  // sqrt(sum V_l / N_l)
    double bias_estimate = 0.0;      // consecutive-level bias proxy at exit
};

/// Level horizon: (l+1) log M / (2 lambda) in general mode,
/// (l+1) log M / lambda in langevin mode.
double t_schedule(int level, int M, double lambda, ScheduleMode mode);

/// Schedule with horizons for levels 0..max_level.
LevelSchedule make_schedule(int max_level, int M, double lambda, ScheduleMode mode);

/// Closed-form level count floor(2|ln eps|/ln M + ln(6 max(mu^2, kappa^2 C2))/ln M) + 1,
/// with (mu, kappa_sq_c2) supplied as constant surrogates. Reporting only;
/// the driver terminates adaptively.
int theoretical_L(double epsilon, int M, std::pair<double, double> constants);

/// Optimal per-level sample counts for target variance variance_share*eps^2:
/// N_l = ceil( sqrt(V_l/C_l) * sum_l' sqrt(V_l' C_l') / (variance_share eps^2) ).
/// All-zero variances degenerate to one sample per level.
std::vector<std::int64_t> optimal_samples(const std::vector<LevelStats>& level_stats,
                                          double epsilon, double variance_share);

/// Full multilevel driver: pilots levels 0..2, iterates allocation and level
/// extension until the bias proxy and the truncation gate both pass, and
/// returns the telescoped estimate with the per-level table.
MlmcResult run_mlmc(const SdeModel& model, const TimestepPolicy& policy,
                    const Observable& observable, const MlmcConfig& config, std::uint64_t seed);

}  // namespace amlmc
