#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "amlmc/errors.hpp"

namespace amlmc {

using Vec = std::vector<double>;

/// Declared regularity constants of an SDE problem. The library trusts the
/// values as given; the grid validators below let the user cross-check them.
struct RegularityConstants {
    double alpha = 1.0;     // dissipativity rate
    double beta = 1.0;      // dissipativity offset / diffusion bound
    double lambda = 1.0;    // contraction rate
    double p_star = 2.0;    // moment order for the contractive condition
    double eta = 1.0;       // diffusion Lipschitz constant
    double gamma = 0.0;     // polynomial-growth Lipschitz prefactor
    double mu = 1.0;        // Lipschitz offset
    double q_growth = 1.0;  // polynomial growth degree
    double kappa = 1.0;     // observable Lipschitz constant
};

/// dX = f(X) dt + g(X) dW with f: R^m -> R^m and g: R^m -> R^{m x d}.
/// Evaluators write into caller-provided buffers; g is row-major m*d.
struct SdeModel {
    int dim_state = 1;
    int dim_noise = 1;
    std::function<void(std::span<const double>, std::span<double>)> drift;
    std::function<void(std::span<const double>, std::span<double>)> diffusion;
    // Optional Jacobian of f, row-major m*m. Required by the contractivity
    // and enhanced-Lipschitz validators.
    std::function<void(std::span<const double>, std::span<double>)> drift_jacobian;
    Vec initial_state{0.0};
    RegularityConstants constants;
    bool is_langevin = false;  // m == d and g identically the identity

    // Set for scalar polynomial-drift models: f(x) = sum_i drift_poly[i] x^i.
    // Lets the quadrature oracle evaluate the potential exactly.
    Vec drift_poly;
    // Set when g is a constant scalar multiple of the identity.
    double diffusion_const = std::numeric_limits<double>::quiet_NaN();

    bool has_jacobian() const { return static_cast<bool>(drift_jacobian); }

    double drift1d(double x) const {
        double out;
        drift(std::span<const double>(&x, 1), std::span<double>(&out, 1));
        return out;
    }
};

/// Observable phi whose invariant-measure expectation is estimated.
struct Observable {
    std::function<double(std::span<const double>)> eval;
    double lipschitz_const = 1.0;
};

Observable observable_abs();       // phi(x) = ||x||
Observable observable_identity();  // phi(x) = x (scalar)
Observable observable_x2();        // phi(x) = ||x||^2 (outside the Lipschitz theory)

/// Evaluation grid for the assumption validators: a tensor grid on
/// [-radius, radius]^m for m <= 2, quasi-random (Halton) points otherwise.
/// Explicit points, when given, replace the generated set.
struct GridSpec {
    double radius = 10.0;
    int points_per_axis = 2001;
    long quasi_count = 100000;
    std::vector<Vec> explicit_points;
};

/// Outcome of one grid scan of an assumption inequality, reported as the
/// most violating value of (left - right).
struct CheckReport {
    bool satisfied = false;
    Vec worst_point;
    double worst_margin = 0.0;
    long points_checked = 0;
    // Secondary diffusion-bound margin max(||g(x)||^2 - beta); reported
    // alongside the drift condition but not folded into `satisfied`.
    double diffusion_margin = -std::numeric_limits<double>::infinity();
};

/// Absolute slack allowed at points of exact equality.
inline constexpr double kCheckTolerance = 1e-9;

/// Scalar double-well Langevin benchmark: f(x) = -x - x^3, g = 1, x0 = 0.
SdeModel builtin_cubic_langevin();

/// Ornstein-Uhlenbeck reference model: f(x) = -x, g = 1. Closed-form
/// stationary law (variance 1/2) for oracle cross-checks.
SdeModel builtin_ou();

/// Scalar model with polynomial drift f(x) = sum_i coeffs[i] x^i and constant
/// diffusion sigma.
SdeModel polynomial_model(Vec coeffs, double sigma);

/// Scans <x, f(x)> + alpha ||x||^2 - beta <= 0 over the grid; also reports
/// the diffusion bound ||g(x)||^2 <= beta as a secondary margin.
CheckReport check_dissipativity(const SdeModel& model, double alpha, double beta,
                                const GridSpec& grid);

/// Scans lambda_max(sym grad f(x)) + ((p*-1)/2) ||grad g||^2 + lambda <= 0.
/// For models with constant g the gradient term is zero.
CheckReport check_contractivity(const SdeModel& model, double lambda, double p_star,
                                const GridSpec& grid);

/// Scans ||grad f(x)|| <= 2 gamma ||x||^q + mu.
CheckReport check_enhanced_lipschitz(const SdeModel& model, const GridSpec& grid,
                                     double gamma, double mu, double q);

namespace detail {
/// Materialized grid points for a given state dimension.
std::vector<Vec> grid_points(const GridSpec& grid, int dim);
double norm2(std::span<const double> v);
}  // namespace detail

}  // namespace amlmc
