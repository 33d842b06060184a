#pragma once

#include <utility>

#include "amlmc/coupling.hpp"
#include "amlmc/mlmc.hpp"

namespace amlmc {

/// Composite-Simpson spec for the 1-D stationary-density oracle.
struct QuadratureSpec {
    double truncation_radius = 8.0;
    int points = 1 << 14;  // panel count, even
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int first_index = 0;
    int last_index = 0;
};

/// Stationary expectation of phi for a scalar constant-diffusion model:
/// integral of phi * rho over [-R, R] with rho(x) ~ exp((2/sigma^2) U(x)),
/// U the drift antiderivative (exact for polynomial drifts). Throws
/// NotScalar / NonIntegrable when the closed-form density does not apply.
double invariant_expectation_1d(const SdeModel& model, const Observable& observable,
                                const QuadratureSpec& spec = {});

/// Monte Carlo estimate of E ||X_horizon||^p with its standard error.
std::pair<double, double> estimate_moment(const SdeModel& model, const TimestepPolicy& policy,
                                          double horizon, double p, std::int64_t n_paths,
                                          std::uint64_t seed);

/// Mean coupled-pair distance E||X_t - Y_t|| at each horizon, both paths on
/// the union of their adaptive grids sharing every Gaussian increment.
std::vector<std::pair<double, double>> contraction_curve(
    const SdeModel& model, const TimestepPolicy& policy, const Vec& x0, const Vec& y0,
    const std::vector<double>& horizons, std::int64_t n_paths, std::uint64_t seed);

/// Regression of ln E||X_t - Y_t|| on t; the slope estimates -lambda.
FitResult estimate_contraction(const SdeModel& model, const TimestepPolicy& policy, const Vec& x0,
                               const Vec& y0, const std::vector<double>& horizons,
                               std::int64_t n_paths, std::uint64_t seed);

/// Least-squares slope of log_M(value) against level over [range.first,
/// range.second] (inclusive). Requires at least 3 points, all positive.
FitResult fit_order(const std::vector<std::pair<int, double>>& values,
                    std::pair<int, int> range, int M = 2);

/// Per-level absolute weak error |MC mean of phi(X_0^l) - oracle| using the
/// level horizon and scale M^-l.
std::vector<std::pair<int, double>> weak_error_curve(const SdeModel& model,
                                                     const TimestepPolicy& policy,
                                                     const Observable& observable,
                                                     const LevelSchedule& schedule,
                                                     std::pair<int, int> levels,
                                                     std::int64_t n_paths, std::uint64_t seed);

}  // namespace amlmc
