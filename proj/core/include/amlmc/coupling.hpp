#pragma once

#include "amlmc/stepping.hpp"

namespace amlmc {

enum class ScheduleMode { general, langevin };

/// Level horizons T_0 < T_1 < ... Level l simulates [-T_l, 0].
struct LevelSchedule {
    std::vector<double> horizons;
    int refinement_factor = 2;  // M
    double lambda = 1.0;
    ScheduleMode mode = ScheduleMode::langevin;
};

/// One coupled fine/coarse draw on a level. For level 0 the coarse fields are
/// zero by convention (first telescoping term has no coarse path).
struct CoupledSample {
    double fine_value = 0.0;
    double coarse_value = 0.0;
    std::int64_t fine_steps = 0;
    std::int64_t coarse_steps = 0;
    int level = 0;
};

/// Test instrumentation for the coupled event loop.
struct CouplingTrace {
    // Sum of the noise accumulated before the coarse start time, per
    // component. For f == 0, g == 1 this equals fine minus coarse exactly.
    Vec preoverlap_noise;
    // Coarse pending increment discarded when the clock first reaches the
    // coarse start time. Equals preoverlap_noise when the reset is correct:
    // the coarse path consumes none of the pre-overlap noise.
    Vec pending_discarded_at_overlap;
    double fine_final_time = 0.0;
    double coarse_final_time = 0.0;
};

/// One coupled sample on level >= 1: fine path on [-T_l, 0] with scale
/// M^-l, coarse path on [-T_{l-1}, 0] with scale M^-(l-1), sharing Brownian
/// increments on the overlap. Event loop follows the single-sample coupling
/// algorithm exactly: advance the clock to the next fine/coarse event,
/// accumulate the shared increment into both pending buffers, and zero the
/// coarse buffer when the clock first reaches the coarse start time.
CoupledSample coupled_sample(const SdeModel& model, const TimestepPolicy& policy,
                             const LevelSchedule& schedule, int level,
                             const Observable& observable, RngStream& rng,
                             CouplingTrace* trace = nullptr);

/// The level-0 term: a single path on [-T_0, 0] with scale 1.
CoupledSample level0_sample(const SdeModel& model, const TimestepPolicy& policy,
                            const LevelSchedule& schedule, const Observable& observable,
                            RngStream& rng);

}  // namespace amlmc
