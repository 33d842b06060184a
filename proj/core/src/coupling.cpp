#include "amlmc/coupling.hpp"

#include <cmath>

namespace amlmc {

namespace {

struct PathState {
    Vec x;
    double pending_h = 0.0;   // step to apply at the next event
    double next_event = 0.0;  // event time (exact stored value)
    Vec pending_dw;
    std::int64_t steps = 0;
};

void em_apply(const SdeModel& model, PathState& p, double t, Vec& fbuf, Vec& gbuf) {
    const int m = model.dim_state;
    const int d = model.dim_noise;
    model.drift(p.x, fbuf);
    if (model.is_langevin) {
        for (int i = 0; i < m; ++i) p.x[i] += fbuf[i] * p.pending_h + p.pending_dw[i];
    } else {
        model.diffusion(p.x, gbuf);
        for (int i = 0; i < m; ++i) {
            double gw = 0.0;
            for (int j = 0; j < d; ++j)
                gw += gbuf[static_cast<std::size_t>(i) * d + j] * p.pending_dw[j];
            p.x[i] += fbuf[i] * p.pending_h + gw;
        }
    }
    for (double v : p.x)
        if (!std::isfinite(v))
            throw NonFiniteState("coupled path became non-finite at t = " + std::to_string(t));
}

}  // namespace

CoupledSample coupled_sample(const SdeModel& model, const TimestepPolicy& policy,
                             const LevelSchedule& schedule, int level,
                             const Observable& observable, RngStream& rng,
                             CouplingTrace* trace) {
    if (level < 1 || static_cast<std::size_t>(level) >= schedule.horizons.size())
        throw ScheduleTooShort("coupled_sample needs 1 <= level < schedule length");

    const int d = model.dim_noise;
    const int M = schedule.refinement_factor;
    const double scale_fine = std::pow(M, -level);
    const double scale_coarse = std::pow(M, -(level - 1));
    const double t_start_fine = -schedule.horizons[level];
    const double t_start_coarse = -schedule.horizons[level - 1];

    PathState fine{model.initial_state, 0.0, t_start_fine, Vec(d, 0.0), 0};
    PathState coarse{model.initial_state, 0.0, t_start_coarse, Vec(d, 0.0), 0};
    Vec dw(d), fbuf(model.dim_state),
        gbuf(static_cast<std::size_t>(model.dim_state) * model.dim_noise);
    if (trace) trace->preoverlap_noise.assign(d, 0.0);

    double t = t_start_fine;
    bool overlap_started = false;
    while (t < 0.0) {
        const double t_old = t;
        t = std::min(coarse.next_event, fine.next_event);
        const double dt = t - t_old;
        for (int j = 0; j < d; ++j) {
            dw[j] = rng.normal_var(dt);
            coarse.pending_dw[j] += dw[j];
        }
        if (!overlap_started && trace)
            for (int j = 0; j < d; ++j) trace->preoverlap_noise[j] += dw[j];
        if (t == t_start_coarse) {
            // Pre-overlap noise belongs to the fine path only: discard the
            // coarse pending accumulation without ever applying it.
            if (trace) trace->pending_discarded_at_overlap = coarse.pending_dw;
            std::fill(coarse.pending_dw.begin(), coarse.pending_dw.end(), 0.0);
            overlap_started = true;
        }
        for (int j = 0; j < d; ++j) fine.pending_dw[j] += dw[j];

        if (t == coarse.next_event) {
            em_apply(model, coarse, t, fbuf, gbuf);
            if (coarse.pending_h > 0.0) ++coarse.steps;
            double h = h_delta(policy, coarse.x, scale_coarse);
            h = std::min(h, -t);
            coarse.pending_h = h;
            coarse.next_event = t + h;
            std::fill(coarse.pending_dw.begin(), coarse.pending_dw.end(), 0.0);
        }
        if (t == fine.next_event) {
            em_apply(model, fine, t, fbuf, gbuf);
            if (fine.pending_h > 0.0) ++fine.steps;
            double h = h_delta(policy, fine.x, scale_fine);
            h = std::min(h, -t);
            fine.pending_h = h;
            fine.next_event = t + h;
            std::fill(fine.pending_dw.begin(), fine.pending_dw.end(), 0.0);
        }
    }

    if (trace) {
        trace->fine_final_time = fine.next_event;
        trace->coarse_final_time = coarse.next_event;
    }
    CoupledSample s;
    s.level = level;
    s.fine_value = observable.eval(fine.x);
    s.coarse_value = observable.eval(coarse.x);
    s.fine_steps = fine.steps;
    s.coarse_steps = coarse.steps;
    return s;
}

CoupledSample level0_sample(const SdeModel& model, const TimestepPolicy& policy,
                            const LevelSchedule& schedule, const Observable& observable,
                            RngStream& rng) {
    if (schedule.horizons.empty()) throw ScheduleTooShort("empty level schedule");
    TimestepPolicy p0 = policy;
    p0.level_scale = 1.0;
    PathResult r = simulate_path(model, p0, schedule.horizons[0], rng);
    CoupledSample s;
    s.level = 0;
    s.fine_value = observable.eval(r.terminal_state);
    s.fine_steps = r.steps_taken;
    return s;
}

}  // namespace amlmc
