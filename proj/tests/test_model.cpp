#include <doctest.h>

#include <cmath>

#include "amlmc/model.hpp"
#include "amlmc/rng.hpp"

using namespace amlmc;

namespace {
GridSpec grid_1d(double radius, int points) {
    GridSpec g;
    g.radius = radius;
    g.points_per_axis = points;
    return g;
}
}  // namespace

TEST_CASE("cubic built-in drift values") {
    SdeModel m = builtin_cubic_langevin();
    CHECK(m.drift1d(0.0) == 0.0);
    CHECK(m.drift1d(1.0) == -2.0);
    CHECK(m.drift1d(-2.0) == 10.0);
    CHECK(m.is_langevin);
    CHECK(m.dim_state == 1);
    CHECK(m.initial_state[0] == 0.0);
}

TEST_CASE("cubic drift is odd on random points") {
    SdeModel m = builtin_cubic_langevin();
    RngStream rng(11, {0, 0, StreamRole::single});
    for (int i = 0; i < 1000; ++i) {
        double x = 10.0 * rng.normal();
        CHECK(m.drift1d(-x) == -m.drift1d(x));
    }
}

TEST_CASE("ou built-in") {
    SdeModel m = builtin_ou();
    CHECK(m.drift1d(3.0) == -3.0);
    CHECK(m.constants.lambda == 1.0);
}

TEST_CASE("dissipativity check on the cubic model") {
    SdeModel m = builtin_cubic_langevin();
    SUBCASE("alpha=1, any beta>0 passes") {
        CHECK(check_dissipativity(m, 1.0, 0.1, grid_1d(5, 1001)).satisfied);
        CHECK(check_dissipativity(m, 1.0, 2.0, grid_1d(10, 2001)).satisfied);
    }
    SUBCASE("alpha=2, beta=0 fails near |x|=1") {
        CheckReport rep = check_dissipativity(m, 2.0, 0.0, grid_1d(5, 1001));
        CHECK_FALSE(rep.satisfied);
        CHECK(std::fabs(std::fabs(rep.worst_point[0]) - 1.0) < 0.5);
    }
    SUBCASE("zero drift on a small grid") {
        SdeModel z = polynomial_model({0.0}, 1.0);
        CHECK(check_dissipativity(z, 1.0, 1.0, grid_1d(0.5, 101)).satisfied);
    }
}

TEST_CASE("contractivity check") {
    SdeModel cubic = builtin_cubic_langevin();
    CHECK(check_contractivity(cubic, 1.0, 2.0, grid_1d(5, 1001)).satisfied);

    CheckReport fail = check_contractivity(cubic, 1.5, 2.0, grid_1d(5, 1001));
    CHECK_FALSE(fail.satisfied);
    CHECK(std::fabs(fail.worst_point[0]) < 1e-9);  // f'(0) = -1 > -1.5

    CheckReport ou = check_contractivity(builtin_ou(), 1.0, 2.0, grid_1d(5, 1001));
    CHECK(ou.satisfied);
    CHECK(ou.worst_margin == 0.0);
}

TEST_CASE("contractivity threshold is monotone in lambda") {
    SdeModel m = builtin_cubic_langevin();
    GridSpec g = grid_1d(5, 501);
    for (double lam : {1.0, 0.7, 0.3, 0.01}) CHECK(check_contractivity(m, lam, 2.0, g).satisfied);
    // and a passing lambda implies every smaller lambda passes
    CheckReport a = check_contractivity(m, 1.0, 2.0, g);
    CheckReport b = check_contractivity(m, 0.5, 2.0, g);
    CHECK(b.worst_margin < a.worst_margin);
}

TEST_CASE("enhanced Lipschitz check") {
    SdeModel cubic = builtin_cubic_langevin();
    CHECK(check_enhanced_lipschitz(cubic, grid_1d(5, 1001), 1.5, 1.0, 2.0).satisfied);
    CHECK_FALSE(check_enhanced_lipschitz(cubic, grid_1d(5, 1001), 1.0, 1.0, 2.0).satisfied);
    CHECK(check_enhanced_lipschitz(builtin_ou(), grid_1d(5, 1001), 0.0, 1.0, 1.0).satisfied);
}

TEST_CASE("missing Jacobian raises") {
    SdeModel m = builtin_cubic_langevin();
    m.drift_jacobian = nullptr;
    CHECK_THROWS_AS(check_contractivity(m, 1.0, 2.0, grid_1d(2, 11)), MissingJacobian);
    CHECK_THROWS_AS(check_enhanced_lipschitz(m, grid_1d(2, 11), 1.0, 1.0, 2.0), MissingJacobian);
}

TEST_CASE("non-finite drift evaluation raises") {
    SdeModel m = builtin_cubic_langevin();
    m.drift = [](std::span<const double> x, std::span<double> out) { out[0] = 1.0 / x[0]; };
    // grid includes 0 -> inf
    CHECK_THROWS_AS(check_dissipativity(m, 1.0, 1.0, grid_1d(1, 3)), NonFiniteEvaluation);
}

TEST_CASE("worst margin is monotone under grid refinement") {
    SdeModel m = builtin_cubic_langevin();
    // radius-5/1001 and radius-10/2001 grids share the 0.01 spacing; the wider
    // grid can only expose a worse (or fp-equal) violation
    CheckReport sub = check_dissipativity(m, 2.0, 0.0, grid_1d(5, 1001));
    CheckReport super = check_dissipativity(m, 2.0, 0.0, grid_1d(10, 2001));
    CHECK(super.worst_margin >= sub.worst_margin - 1e-9);
}

TEST_CASE("diffusion bound reported separately") {
    SdeModel m = builtin_cubic_langevin();  // ||g||^2 = 1
    CheckReport rep = check_dissipativity(m, 1.0, 0.1, grid_1d(5, 1001));
    CHECK(rep.satisfied);                      // drift condition holds
    CHECK(rep.diffusion_margin == doctest::Approx(0.9));  // 1 - 0.1 exceeds the bound
    CHECK(check_dissipativity(m, 0.5, 1.0, grid_1d(5, 1001)).diffusion_margin <= 0.0);
}
