#include "amlmc/analysis.hpp"

#include <cmath>

#include "amlmc/parallel.hpp"

namespace amlmc {

namespace {

// Antiderivative of the drift at x, exact for polynomial drifts.
double potential_poly(const Vec& coeffs, double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        v = v * x + coeffs[i] / static_cast<double>(i + 1);
    return v * x;
}

}  // namespace

double invariant_expectation_1d(const SdeModel& model, const Observable& observable,
                                const QuadratureSpec& spec) {
    if (model.dim_state != 1 || model.dim_noise != 1 || std::isnan(model.diffusion_const))
        throw NotScalar("oracle needs a scalar model with constant diffusion");
    if (model.diffusion_const == 0.0) {
        // Frozen dynamics: the invariant law is the point mass at x0.
        bool drift_zero = true;
        for (double c : model.drift_poly) drift_zero = drift_zero && c == 0.0;
        if (model.drift_poly.empty()) drift_zero = model.drift1d(0.0) == 0.0;
        if (!drift_zero) throw NonIntegrable("zero diffusion with nonzero drift has no density");
        return observable.eval(std::span<const double>(model.initial_state.data(), 1));
    }
    if (spec.points < 16 || spec.points % 2 != 0)
        throw OutOfRange("quadrature panel count must be even and >= 16");

    const double sigma2 = model.diffusion_const * model.diffusion_const;
    const double R = spec.truncation_radius;
    const int n = spec.points;
    const double h = 2.0 * R / n;

    // Potential on the grid: exact for polynomial drifts, cumulative Simpson
    // from 0 otherwise (grid is symmetric so 0 is a node).
    std::vector<double> pot(n + 1);
    if (!model.drift_poly.empty()) {
        for (int i = 0; i <= n; ++i) pot[i] = potential_poly(model.drift_poly, -R + i * h);
    } else {
        const int mid = n / 2;
        pot[mid] = 0.0;
        for (int i = mid; i < n; ++i) {
            const double a = -R + i * h, b = a + h;
            pot[i + 1] = pot[i] + h / 6.0 *
                (model.drift1d(a) + 4.0 * model.drift1d(0.5 * (a + b)) + model.drift1d(b));
        }
        for (int i = mid; i > 0; --i) {
            const double b = -R + i * h, a = b - h;
            pot[i - 1] = pot[i] - h / 6.0 *
                (model.drift1d(a) + 4.0 * model.drift1d(0.5 * (a + b)) + model.drift1d(b));
        }
    }

    // Shift by the max to avoid overflow in the exponential.
    double pot_max = pot[0];
    for (double v : pot) pot_max = std::max(pot_max, v * 2.0 / sigma2);
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -R + i * h;
        const double rho = std::exp(2.0 / sigma2 * pot[i] - pot_max);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        den += w * rho;
        num += w * rho * observable.eval(std::span<const double>(&x, 1));
    }
    const double rho_l = std::exp(2.0 / sigma2 * pot[0] - pot_max);
    const double rho_r = std::exp(2.0 / sigma2 * pot[n] - pot_max);
    if ((rho_l + rho_r) * R > 1e-10 * den * h / 3.0)
        throw NonIntegrable("stationary density does not decay within the truncation radius");
    return num / den;
}

std::pair<double, double> estimate_moment(const SdeModel& model, const TimestepPolicy& policy,
                                          double horizon, double p, std::int64_t n_paths,
                                          std::uint64_t seed) {
    if (n_paths < 2) throw OutOfRange("estimate_moment needs at least 2 paths");
    std::vector<double> vals(n_paths);
    parallel_for(n_paths, [&](std::int64_t i) {
        RngStream rng(seed, {0, static_cast<std::uint64_t>(i), StreamRole::single});
        PathResult r = simulate_path(model, policy, horizon, rng);
        vals[i] = std::pow(detail::norm2(r.terminal_state), p);
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(n_paths);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double stderr_ = std::sqrt(ss / (n_paths - 1) / static_cast<double>(n_paths));
    return {mean, stderr_};
}

std::vector<std::pair<double, double>> contraction_curve(
    const SdeModel& model, const TimestepPolicy& policy, const Vec& x0, const Vec& y0,
    const std::vector<double>& horizons, std::int64_t n_paths, std::uint64_t seed) {
    if (x0 == y0) throw DegenerateFit("contraction estimate needs distinct initial points");
    const int m = model.dim_state;
    const int d = model.dim_noise;
    const double t_end = horizons.back();
    std::vector<std::vector<double>> dist(horizons.size(), std::vector<double>(n_paths));

    parallel_for(n_paths, [&](std::int64_t path) {
        RngStream rng(seed, {1, static_cast<std::uint64_t>(path), StreamRole::coupled});
        Vec x = x0, y = y0, fx(m), fy(m), gx(m * d), gy(m * d), dw(d);
        double t = 0.0;
        std::size_t next_h = 0;
        while (t < t_end) {
            // Union grid: the pair advances by the smaller of the two
            // proposed steps, clamped to the next reporting horizon.
            double h = std::min(h_delta(policy, x), h_delta(policy, y));
            const double stop = horizons[next_h];
            bool at_stop = h >= stop - t;
            h = at_stop ? stop - t : h;
            for (int j = 0; j < d; ++j) dw[j] = rng.normal_var(h);
            model.drift(x, fx);
            model.drift(y, fy);
            if (model.is_langevin) {
                for (int i = 0; i < m; ++i) {
                    x[i] += fx[i] * h + dw[i];
                    y[i] += fy[i] * h + dw[i];
                }
            } else {
                model.diffusion(x, gx);
                model.diffusion(y, gy);
                for (int i = 0; i < m; ++i) {
                    double gwx = 0.0, gwy = 0.0;
                    for (int j = 0; j < d; ++j) {
                        gwx += gx[static_cast<std::size_t>(i) * d + j] * dw[j];
                        gwy += gy[static_cast<std::size_t>(i) * d + j] * dw[j];
                    }
                    x[i] += fx[i] * h + gwx;
                    y[i] += fy[i] * h + gwy;
                }
            }
            for (int i = 0; i < m; ++i)
                if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
                    throw NonFiniteState("contraction pair became non-finite");
            t = at_stop ? stop : t + h;
            if (at_stop) {
                Vec diff(m);
                for (int i = 0; i < m; ++i) diff[i] = x[i] - y[i];
                dist[next_h][path] = detail::norm2(diff);
                ++next_h;
                if (next_h == horizons.size()) break;
            }
        }
    });

    std::vector<std::pair<double, double>> curve;
    curve.reserve(horizons.size());
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        double mean = 0.0;
        for (double v : dist[k]) mean += v;
        curve.emplace_back(horizons[k], mean / static_cast<double>(n_paths));
    }
    return curve;
}

FitResult estimate_contraction(const SdeModel& model, const TimestepPolicy& policy, const Vec& x0,
                               const Vec& y0, const std::vector<double>& horizons,
                               std::int64_t n_paths, std::uint64_t seed) {
    auto curve = contraction_curve(model, policy, x0, y0, horizons, n_paths, seed);
    // ln E||X - Y|| against t, ordinary least squares.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(curve.size());
    for (auto [t, v] : curve) {
        if (!(v > 0.0)) throw DegenerateFit("zero pair distance in contraction fit");
        const double ly = std::log(v);
        sx += t;
        sy += ly;
        sxx += t * t;
        sxy += t * ly;
        syy += ly * ly;
    }
    FitResult fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto [t, v] : curve) {
        const double e = std::log(v) - (fit.intercept + fit.slope * t);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.first_index = 0;
    fit.last_index = static_cast<int>(curve.size()) - 1;
    return fit;
}

FitResult fit_order(const std::vector<std::pair<int, double>>& values, std::pair<int, int> range,
                    int M) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    const double log_m = std::log(static_cast<double>(M));
    for (auto [level, v] : values) {
        if (level < range.first || level > range.second) continue;
        if (!(v > 0.0)) throw NonPositiveValue("fit_order needs positive values");
        const double y = std::log(v) / log_m;
        sx += level;
        sy += y;
        sxx += static_cast<double>(level) * level;
        sxy += level * y;
        syy += y * y;
        ++n;
    }
    if (n < 3) throw OutOfRange("fit_order needs at least 3 points in range");
    FitResult fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto [level, v] : values) {
        if (level < range.first || level > range.second) continue;
        const double e = std::log(v) / log_m - (fit.intercept + fit.slope * level);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.first_index = range.first;
    fit.last_index = range.second;
    return fit;
}

std::vector<std::pair<int, double>> weak_error_curve(const SdeModel& model,
                                                     const TimestepPolicy& policy,
                                                     const Observable& observable,
                                                     const LevelSchedule& schedule,
                                                     std::pair<int, int> levels,
                                                     std::int64_t n_paths, std::uint64_t seed) {
    const double oracle = invariant_expectation_1d(model, observable);
    std::vector<std::pair<int, double>> curve;
    for (int level = levels.first; level <= levels.second; ++level) {
        if (static_cast<std::size_t>(level) >= schedule.horizons.size())
            throw ScheduleTooShort("weak_error_curve level beyond schedule");
        TimestepPolicy p = policy;
        p.level_scale = std::pow(schedule.refinement_factor, -level);
        std::vector<double> vals(n_paths);
        parallel_for(n_paths, [&](std::int64_t i) {
            RngStream rng(seed, {static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(i),
                                 StreamRole::single});
            PathResult r = simulate_path(model, p, schedule.horizons[level], rng);
            vals[i] = observable.eval(r.terminal_state);
        });
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(n_paths);
        curve.emplace_back(level, std::fabs(mean - oracle));
    }
    return curve;
}

}  // namespace amlmc
