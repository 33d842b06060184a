#include "amlmc/stepping.hpp"

#include <algorithm>
#include <cmath>

namespace amlmc {

double default_h_cubic(double x) {
    return std::max(1.0, std::fabs(x)) / std::max(1.0, std::fabs(x + x * x * x));
}

TimestepPolicy cubic_policy(double level_scale, int refinement_factor) {
    TimestepPolicy p;
    p.h_base = [](std::span<const double> x) { return default_h_cubic(x[0]); };
    p.h_max = 1.0;
    p.level_scale = level_scale;
    p.refinement_factor = refinement_factor;
    return p;
}

TimestepPolicy drift_ratio_policy(const SdeModel& model, double level_scale,
                                  int refinement_factor) {
    TimestepPolicy p;
    const int m = model.dim_state;
    auto drift = model.drift;
    p.h_base = [drift, m](std::span<const double> x) {
        Vec f(m);
        drift(x, f);
        return std::max(1.0, detail::norm2(x)) / std::max(1.0, detail::norm2(f));
    };
    p.h_max = 1.0;
    p.level_scale = level_scale;
    p.refinement_factor = refinement_factor;
    return p;
}

TimestepPolicy constant_policy(double h, double level_scale, int refinement_factor) {
    TimestepPolicy p;
    p.h_base = [h](std::span<const double>) { return h; };
    p.h_max = h;
    p.level_scale = level_scale;
    p.refinement_factor = refinement_factor;
    return p;
}

double h_delta(const TimestepPolicy& policy, std::span<const double> x, double scale) {
    return scale * std::min(policy.h_max, policy.h_base(x));
}

double h_delta(const TimestepPolicy& policy, std::span<const double> x) {
    return h_delta(policy, x, policy.level_scale);
}

namespace {

struct StepBuffers {
    Vec f, g, dw;
    explicit StepBuffers(const SdeModel& m)
        : f(m.dim_state), g(static_cast<std::size_t>(m.dim_state) * m.dim_noise), dw(m.dim_noise) {}
};

// One Euler-Maruyama update of x in place; throws NonFiniteState on blow-up.
void em_update(const SdeModel& model, Vec& x, double h, std::span<const double> dw,
               StepBuffers& buf, double t) {
    const int m = model.dim_state;
    const int d = model.dim_noise;
    model.drift(x, buf.f);
    if (model.is_langevin) {
        for (int i = 0; i < m; ++i) x[i] += buf.f[i] * h + dw[i];
    } else {
        model.diffusion(x, buf.g);
        for (int i = 0; i < m; ++i) {
            double gw = 0.0;
            for (int j = 0; j < d; ++j) gw += buf.g[static_cast<std::size_t>(i) * d + j] * dw[j];
            x[i] += buf.f[i] * h + gw;
        }
    }
    for (double v : x)
        if (!std::isfinite(v))
            throw NonFiniteState("state became non-finite at t = " + std::to_string(t));
}

template <typename OnStep>
PathResult run_path(const SdeModel& model, const TimestepPolicy& policy, double horizon,
                    RngStream& rng, OnStep&& on_step) {
    if (!(horizon > 0.0)) throw OutOfRange("horizon must be positive");
    const int d = model.dim_noise;
    StepBuffers buf(model);
    PathResult res;
    res.horizon = horizon;
    Vec x = model.initial_state;
    res.max_norm = detail::norm2(x);
    double t = 0.0;
    while (t < horizon) {
        const double h_prop = h_delta(policy, x);
        const bool last = h_prop >= horizon - t;
        const double h = last ? horizon - t : h_prop;
        for (int j = 0; j < d; ++j) buf.dw[j] = rng.normal_var(h);
        em_update(model, x, h, buf.dw, buf, t);
        t = last ? horizon : t + h;
        ++res.steps_taken;
        res.max_norm = std::max(res.max_norm, detail::norm2(x));
        on_step(t, x, buf.dw);
    }
    res.terminal_state = std::move(x);
    return res;
}

}  // namespace

PathResult simulate_path(const SdeModel& model, const TimestepPolicy& policy, double horizon,
                         RngStream& rng) {
    return run_path(model, policy, horizon, rng, [](double, const Vec&, const Vec&) {});
}

RecordedPath simulate_path_recorded(const SdeModel& model, const TimestepPolicy& policy,
                                    double horizon, RngStream& rng) {
    RecordedPath rec;
    rec.times.push_back(0.0);
    rec.states.push_back(model.initial_state);
    rec.result = run_path(model, policy, horizon, rng,
                          [&rec](double t, const Vec& x, const Vec& dw) {
                              rec.times.push_back(t);
                              rec.states.push_back(x);
                              rec.increments.push_back(dw);
                          });
    return rec;
}

Vec interpolate(const SdeModel& model, const RecordedPath& path, double t, RngStream& bridge_rng) {
    if (path.times.empty() || t < path.times.front() || t > path.times.back())
        throw OutOfRange("interpolation time outside the recorded span");
    auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
    std::size_t n = static_cast<std::size_t>(it - path.times.begin());
    if (n > 0) --n;
    if (t == path.times[n]) return path.states[n];
    if (n + 1 < path.times.size() && t == path.times[n + 1]) return path.states[n + 1];

    const double t0 = path.times[n];
    const double t1 = path.times[n + 1];
    const double h = t1 - t0;
    const double tau = t - t0;
    const int m = model.dim_state;
    const int d = model.dim_noise;
    const Vec& x0 = path.states[n];
    const Vec& dw = path.increments[n];

    // Brownian bridge draw of W_t - W_{t0} given the full-step increment.
    Vec b(d);
    const double var = tau * (t1 - t) / h;
    for (int j = 0; j < d; ++j) b[j] = dw[j] * (tau / h) + bridge_rng.normal_var(var);

    Vec f(m), g(static_cast<std::size_t>(m) * d), out(m);
    model.drift(x0, f);
    if (model.is_langevin) {
        for (int i = 0; i < m; ++i) out[i] = x0[i] + f[i] * tau + b[i];
    } else {
        model.diffusion(x0, g);
        for (int i = 0; i < m; ++i) {
            double gw = 0.0;
            for (int j = 0; j < d; ++j) gw += g[static_cast<std::size_t>(i) * d + j] * b[j];
            out[i] = x0[i] + f[i] * tau + gw;
        }
    }
    return out;
}

CheckReport check_timestep_condition(const SdeModel& model, const TimestepPolicy& policy,
                                     double alpha, double beta, const GridSpec& grid) {
    const int m = model.dim_state;
    Vec f(m);
    CheckReport rep;
    for (const Vec& x : detail::grid_points(grid, m)) {
        model.drift(x, f);
        double xf = 0.0, xx = 0.0, ff = 0.0;
        for (int i = 0; i < m; ++i) {
            xf += x[i] * f[i];
            xx += x[i] * x[i];
            ff += f[i] * f[i];
        }
        const double h = policy.h_base(x);
        if (!std::isfinite(h) || !std::isfinite(ff))
            throw NonFiniteEvaluation("non-finite evaluation in timestep condition scan");
        const double margin = xf + 0.5 * h * ff + alpha * xx - beta;
        if (rep.points_checked == 0 || margin > rep.worst_margin ||
            (margin == rep.worst_margin && x < rep.worst_point)) {
            rep.worst_margin = margin;
            rep.worst_point = x;
        }
        ++rep.points_checked;
    }
    rep.satisfied = rep.worst_margin <= kCheckTolerance;
    return rep;
}

CheckReport check_lower_bound(const TimestepPolicy& policy, double xi, double zeta, double q,
                              const GridSpec& grid) {
    CheckReport rep;
    for (const Vec& x : detail::grid_points(grid, 1)) {
        const double margin = 1.0 - policy.h_base(x) * (xi * std::pow(detail::norm2(x), q) + zeta);
        if (rep.points_checked == 0 || margin > rep.worst_margin ||
            (margin == rep.worst_margin && x < rep.worst_point)) {
            rep.worst_margin = margin;
            rep.worst_point = x;
        }
        ++rep.points_checked;
    }
    rep.satisfied = rep.worst_margin <= kCheckTolerance;
    return rep;
}

}  // namespace amlmc
