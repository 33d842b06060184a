#pragma once

#include <cstdint>
#include <functional>

#include "amlmc/model.hpp"
#include "amlmc/rng.hpp"

namespace amlmc {

/// State-dependent timestep policy. The level-scaled step used by the
/// integrator is h^delta(x) = delta * min(h_max, h_base(x)), which sits inside
/// the admissible band delta*min(h_max,h) <= h^delta <= min(delta*h_max, h).
struct TimestepPolicy {
    std::function<double(std::span<const double>)> h_base;
    double h_max = 1.0;
    int refinement_factor = 2;  // M
    double level_scale = 1.0;   // delta
};

/// h(x) = max(1,|x|) / max(1,|x+x^3|), the step choice for the cubic
/// double-well benchmark.
double default_h_cubic(double x);

/// Policy wrapping default_h_cubic.
TimestepPolicy cubic_policy(double level_scale = 1.0, int refinement_factor = 2);

/// h(x) = max(1,||x||) / max(1,||f(x)||); reduces to h == 1 for the OU model
/// and to default_h_cubic for the cubic model.
TimestepPolicy drift_ratio_policy(const SdeModel& model, double level_scale = 1.0,
                                  int refinement_factor = 2);

/// Uniform step h(x) == h. Violates the adaptive timestep condition for
/// superlinear drifts; kept as the instability demonstrator.
TimestepPolicy constant_policy(double h, double level_scale = 1.0, int refinement_factor = 2);

/// The level-scaled timestep delta * min(h_max, h_base(x)).
double h_delta(const TimestepPolicy& policy, std::span<const double> x);
/// Same with an explicit scale overriding policy.level_scale (used by the
/// coupled sampler for the coarse path).
double h_delta(const TimestepPolicy& policy, std::span<const double> x, double scale);

struct PathResult {
    Vec terminal_state;
    std::int64_t steps_taken = 0;
    double max_norm = 0.0;
    double horizon = 0.0;
};

/// Recorded trajectory for interpolation queries: step n covers
/// [times[n], times[n+1]] with state states[n] and Brownian increment
/// increments[n] (d components per step).
struct RecordedPath {
    std::vector<double> times;       // size steps+1, last == horizon
    std::vector<Vec> states;         // size steps+1
    std::vector<Vec> increments;     // size steps
    PathResult result;
};

/// One adaptive Euler-Maruyama path on [0, horizon]. The last step is clamped
/// so the path lands exactly on the horizon. Throws NonFiniteState if the
/// state leaves the finite range.
PathResult simulate_path(const SdeModel& model, const TimestepPolicy& policy, double horizon,
                         RngStream& rng);

/// Same, storing the full trajectory for interpolate().
RecordedPath simulate_path_recorded(const SdeModel& model, const TimestepPolicy& policy,
                                    double horizon, RngStream& rng);

/// Continuous interpolant at time t in [0, horizon]: the value of the frozen-
/// coefficient step SDE, with the within-step Brownian value drawn as a
/// Brownian bridge conditioned on the recorded increment.
Vec interpolate(const SdeModel& model, const RecordedPath& path, double t, RngStream& bridge_rng);

/// Scans <x,f(x)> + (1/2) h(x) ||f(x)||^2 + alpha ||x||^2 - beta <= 0.
CheckReport check_timestep_condition(const SdeModel& model, const TimestepPolicy& policy,
                                     double alpha, double beta, const GridSpec& grid);

/// Scans h(x) (xi ||x||^q + zeta) >= 1, reported as margin 1 - h*(...).
CheckReport check_lower_bound(const TimestepPolicy& policy, double xi, double zeta, double q,
                              const GridSpec& grid);

}  // namespace amlmc
