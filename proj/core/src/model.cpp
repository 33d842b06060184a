#include "amlmc/model.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace amlmc {

namespace detail {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

namespace {

double halton(long index, int base) {
    double f = 1.0, r = 0.0;
    long i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<Vec> grid_points(const GridSpec& grid, int dim) {
    if (!grid.explicit_points.empty()) return grid.explicit_points;
    std::vector<Vec> pts;
    if (dim == 1) {
        pts.reserve(grid.points_per_axis);
        for (int i = 0; i < grid.points_per_axis; ++i) {
            double x = -grid.radius + 2.0 * grid.radius * i / (grid.points_per_axis - 1);
            pts.push_back({x});
        }
    } else if (dim == 2) {
        pts.reserve(static_cast<std::size_t>(grid.points_per_axis) * grid.points_per_axis);
        for (int i = 0; i < grid.points_per_axis; ++i) {
            double x = -grid.radius + 2.0 * grid.radius * i / (grid.points_per_axis - 1);
            for (int j = 0; j < grid.points_per_axis; ++j) {
                double y = -grid.radius + 2.0 * grid.radius * j / (grid.points_per_axis - 1);
                pts.push_back({x, y});
            }
        }
    } else {
        pts.reserve(grid.quasi_count);
        for (long n = 0; n < grid.quasi_count; ++n) {
            Vec p(dim);
            for (int k = 0; k < dim; ++k)
                p[k] = grid.radius * (2.0 * halton(n + 1, kPrimes[k % 12]) - 1.0);
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

}  // namespace detail

namespace {

// Deterministic argmax reduction: strictly larger margin wins, ties go to the
// lexicographically smallest point.
void update_worst(CheckReport& rep, double margin, const Vec& point) {
    if (rep.points_checked == 0 || margin > rep.worst_margin ||
        (margin == rep.worst_margin && point < rep.worst_point)) {
        rep.worst_margin = margin;
        rep.worst_point = point;
    }
}

void require_finite(std::span<const double> v, const Vec& at) {
    for (double x : v)
        if (!std::isfinite(x)) {
            std::string msg = "non-finite model evaluation at point (";
            for (double p : at) msg += std::to_string(p) + " ";
            msg += ")";
            throw NonFiniteEvaluation(msg);
        }
}

}  // namespace

Observable observable_abs() {
    return {[](std::span<const double> x) { return detail::norm2(x); }, 1.0};
}

Observable observable_identity() {
    return {[](std::span<const double> x) { return x[0]; }, 1.0};
}

Observable observable_x2() {
    return {[](std::span<const double> x) {
                double n = detail::norm2(x);
                return n * n;
            },
            1.0};
}

SdeModel builtin_cubic_langevin() {
    SdeModel m;
    m.dim_state = 1;
    m.dim_noise = 1;
    m.drift = [](std::span<const double> x, std::span<double> out) {
        out[0] = -x[0] - x[0] * x[0] * x[0];
    };
    m.diffusion = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
    m.drift_jacobian = [](std::span<const double> x, std::span<double> out) {
        out[0] = -1.0 - 3.0 * x[0] * x[0];
    };
    m.initial_state = {0.0};
    m.is_langevin = true;
    m.drift_poly = {0.0, -1.0, 0.0, -1.0};
    m.diffusion_const = 1.0;
    m.constants.alpha = 0.5;
    m.constants.beta = 1.0;
    m.constants.lambda = 1.0;  // f'(x) = -1 - 3x^2 <= -1
    m.constants.gamma = 1.5;
    m.constants.mu = 1.0;
    m.constants.q_growth = 2.0;
    return m;
}

SdeModel builtin_ou() {
    SdeModel m;
    m.dim_state = 1;
    m.dim_noise = 1;
    m.drift = [](std::span<const double> x, std::span<double> out) { out[0] = -x[0]; };
    m.diffusion = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
    m.drift_jacobian = [](std::span<const double>, std::span<double> out) { out[0] = -1.0; };
    m.initial_state = {0.0};
    m.is_langevin = true;
    m.drift_poly = {0.0, -1.0};
    m.diffusion_const = 1.0;
    m.constants.alpha = 1.0;
    m.constants.beta = 1.0;
    m.constants.lambda = 1.0;
    m.constants.gamma = 0.0;
    m.constants.mu = 1.0;
    m.constants.q_growth = 1.0;
    return m;
}

SdeModel polynomial_model(Vec coeffs, double sigma) {
    SdeModel m;
    m.dim_state = 1;
    m.dim_noise = 1;
    Vec c = coeffs;
    m.drift = [c](std::span<const double> x, std::span<double> out) {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x[0] + c[i];
        out[0] = v;
    };
    m.drift_jacobian = [c](std::span<const double> x, std::span<double> out) {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 1;) v = v * x[0] + static_cast<double>(i) * c[i];
        out[0] = v;
    };
    m.diffusion = [sigma](std::span<const double>, std::span<double> out) { out[0] = sigma; };
    m.initial_state = {0.0};
    m.is_langevin = (sigma == 1.0);
    m.drift_poly = std::move(coeffs);
    m.diffusion_const = sigma;
    return m;
}

CheckReport check_dissipativity(const SdeModel& model, double alpha, double beta,
                                const GridSpec& grid) {
    const int m = model.dim_state;
    const int d = model.dim_noise;
    Vec f(m), g(static_cast<std::size_t>(m) * d);
    CheckReport rep;
    for (const Vec& x : detail::grid_points(grid, m)) {
        model.drift(x, f);
        require_finite(f, x);
        model.diffusion(x, g);
        require_finite(g, x);
        double xf = 0.0, xx = 0.0;
        for (int i = 0; i < m; ++i) {
            xf += x[i] * f[i];
            xx += x[i] * x[i];
        }
        update_worst(rep, xf + alpha * xx - beta, x);
        double g2 = 0.0;
        for (double v : g) g2 += v * v;
        rep.diffusion_margin = std::max(rep.diffusion_margin, g2 - beta);
        ++rep.points_checked;
    }
    rep.satisfied = rep.worst_margin <= kCheckTolerance;
    return rep;
}

CheckReport check_contractivity(const SdeModel& model, double lambda, double p_star,
                                const GridSpec& grid) {
    if (!model.has_jacobian()) throw MissingJacobian("check_contractivity requires drift_jacobian");
    const int m = model.dim_state;
    Vec jac(static_cast<std::size_t>(m) * m);
    CheckReport rep;
    for (const Vec& x : detail::grid_points(grid, m)) {
        model.drift_jacobian(x, jac);
        require_finite(jac, x);
        double lam_max;
        if (m == 1) {
            lam_max = jac[0];
        } else {
            Eigen::MatrixXd J = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                         Eigen::RowMajor>>(jac.data(), m, m);
            Eigen::MatrixXd S = 0.5 * (J + J.transpose());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
            lam_max = es.eigenvalues().maxCoeff();
        }
        // Constant-diffusion models have no grad-g term; non-constant g is
        // accounted for through the declared eta bound.
        double grad_g_sq = std::isnan(model.diffusion_const) ? model.constants.eta : 0.0;
        update_worst(rep, lam_max + 0.5 * (p_star - 1.0) * grad_g_sq + lambda, x);
        ++rep.points_checked;
    }
    rep.satisfied = rep.worst_margin <= kCheckTolerance;
    return rep;
}

CheckReport check_enhanced_lipschitz(const SdeModel& model, const GridSpec& grid, double gamma,
                                     double mu, double q) {
    if (!model.has_jacobian())
        throw MissingJacobian("check_enhanced_lipschitz requires drift_jacobian");
    const int m = model.dim_state;
    Vec jac(static_cast<std::size_t>(m) * m);
    CheckReport rep;
    for (const Vec& x : detail::grid_points(grid, m)) {
        model.drift_jacobian(x, jac);
        require_finite(jac, x);
        double frob = detail::norm2(jac);
        update_worst(rep, frob - (2.0 * gamma * std::pow(detail::norm2(x), q) + mu), x);
        ++rep.points_checked;
    }
    rep.satisfied = rep.worst_margin <= kCheckTolerance;
    return rep;
}

}  // namespace amlmc
