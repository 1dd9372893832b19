#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "maxineq/rng.hpp"
#include "maxineq/special_fn.hpp"

using namespace maxineq;

namespace {

GammaSolution solve_default(double p, double alpha, double x_max = 24.0) {
    return solve_gamma(make_params(p, alpha), x_max, 1e-9);
}

}  // namespace

TEST_CASE("region classification") {
    const GammaSolution sol = solve_default(2.0, 1.0);
    CHECK(classify(sol, 0.0, 0.0) == Region::D0);   // gamma(0) = 1/p > 0
    CHECK(classify(sol, 0.0, 1.0) == Region::D1);   // x + |y| = 1 boundary
    CHECK(classify(sol, 0.5, 1.0) == Region::D2);   // gamma < 1 and x+|y| > 1
    CHECK(classify(sol, 0.0, -1.0) == Region::D1);  // even in y
    // boundary conventions
    const double g03 = gamma_eval(sol, 0.1).value;
    CHECK(classify(sol, 0.1, g03) == Region::D0);
    CHECK_THROWS_AS(classify(sol, 0.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(classify(sol, -0.5, 0.0), std::domain_error);
}

TEST_CASE("classification beyond the solved range uses monotonicity") {
    const GammaSolution sol = solve_default(2.0, 1.0, 8.0);
    // gamma(x_max) ~ 0.93; |y| below it is decidable for any larger x
    CHECK(classify(sol, 9.5, 0.5) == Region::D0);
    CHECK_THROWS_AS(classify(sol, 9.5, 0.99), std::domain_error);
}

TEST_CASE("u values at the anchor points") {
    const GammaSolution sol = solve_default(2.0, 1.0);
    CHECK(u_eval(sol, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // on D0 at x0 the value vanishes: 1 - ((alpha+1)p x0)^p = 0
    const double x0 = sol.params.x0;
    CHECK(std::abs(u_eval(sol, x0, 0.2)) < 1e-12);
    CHECK(std::abs(u_eval(sol, x0, -0.2)) < 1e-12);
    for (double x : {1.0, 2.0, 5.0, 10.0})
        CHECK(u_eval(sol, x, 1.0) <= 0.0);
}

TEST_CASE("u is even in y and continuous across seams") {
    for (auto [p, alpha] : {std::pair{2.0, 1.0}, {3.0, 0.5}, {4.0, 0.25}}) {
        const GammaSolution sol = solve_default(p, alpha);
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const double x = rng.uniform(0.0, 6.0);
            const double y = rng.uniform(-1.0, 1.0);
            CHECK(u_eval(sol, x, y) == u_eval(sol, x, -y));
        }
        // one-sided branch values agree along |y| = gamma(x)
        for (int i = 0; i < 50; ++i) {
            const double x = rng.uniform(0.01, 5.0);
            const double ay = gamma_eval(sol, x).value;
            const Region other = (x + ay <= 1.0) ? Region::D1 : Region::D2;
            const double va = u_branch_value(sol, Region::D0, x, ay);
            const double vb = u_branch_value(sol, other, x, ay);
            CHECK(std::abs(va - vb) <= 1e-7 * std::max(1.0, std::abs(va)));
        }
    }
}

TEST_CASE("homogeneity of degree p") {
    const GammaSolution sol = solve_default(2.5, 0.5);
    const double p = sol.params.p;
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(0.0, 3.0);
        const double y = rng.uniform(-2.0, 2.0);
        const double z = rng.uniform(0.1, 2.0);
        const double t = rng.uniform(0.05, 4.0);
        const double lhs = U_eval(sol, {t * x, t * y, t * z});
        const double rhs = std::pow(t, p) * U_eval(sol, {x, y, z});
        CHECK(std::abs(lhs - rhs) <=
              1e-9 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("U anchor values and symmetry") {
    const GammaSolution sol = solve_default(2.0, 1.0);
    CHECK(U_eval(sol, {0.0, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(U_eval(sol, {0.0, 0.0, 2.0}) == doctest::Approx(4.0).epsilon(1e-14));
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const double x = rng.uniform(0.0, 4.0);
        const double y = rng.uniform(-2.0, 2.0);
        const double z = rng.uniform(0.1, 2.0);
        CHECK(U_eval(sol, {x, y, z}) == U_eval(sol, {x, -y, z}));
    }
    CHECK_THROWS_AS(U_eval(sol, {0.5, 0.5, 0.0}), std::domain_error);
    CHECK_THROWS_AS(U_eval(sol, {-0.5, 0.5, 1.0}), std::domain_error);
}

TEST_CASE("equality on the majorization set") {
    // normalized D0 points with |y| <= z meet the majorant exactly
    const GammaSolution sol = solve_default(3.0, 1.0);
    const Params& prm = sol.params;
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(0.0, 2.0);
        const double g = gamma_eval(sol, std::min(x, sol.x_max)).value;
        const double y = rng.uniform(-g, g);
        const double uv = U_eval(sol, {x, y, 1.0});
        const double maj = 1.0 - std::pow(prm.cap1 * x, prm.p);
        CHECK(uv == maj);  // same branch formula, bitwise
    }
}

TEST_CASE("gradient matches the boundary line-derivative formulas") {
    for (auto [p, alpha] : {std::pair{2.0, 1.0}, {3.0, 0.5}, {2.5, 0.25}}) {
        const GammaSolution sol = solve_default(p, alpha);
        // y below 1/p: direction (1, a) has zero derivative at x = 0
        for (double y : {0.05, 1.0 / p - 0.01}) {
            const Grad2 g = U_grad(sol, {0.0, y, 1.0});
            for (double a : {-alpha, 0.0, alpha})
                CHECK(std::abs(g.dx + a * g.dy) < 1e-12);
        }
        // y above 1/p: slope-a derivative -p^2 (py-1)^{p-1} (alpha-a) / (p-1)^{p-1}
        for (double y : {1.0 / p + 0.05, 0.6, 0.95}) {
            const Grad2 g = U_grad(sol, {0.0, y, 1.0});
            for (double a : {-alpha, -0.3 * alpha, 0.7 * alpha, alpha}) {
                const double expected = -p * p * std::pow(p * y - 1.0, p - 1.0) *
                                        (alpha - a) / std::pow(p - 1.0, p - 1.0);
                CHECK(g.dx + a * g.dy ==
                      doctest::Approx(expected).epsilon(1e-9).scale(1.0));
            }
        }
        // interior of D0: no y-dependence, strictly falling in x
        const Grad2 g0 = U_grad(sol, {0.2 * sol.params.x0, 0.1 / p, 1.0});
        CHECK(g0.dy == 0.0);
        CHECK(g0.dx < 0.0);
    }
}

TEST_CASE("gradient agrees with central finite differences") {
    const GammaSolution sol = solve_default(2.0, 1.0);
    Rng rng(17);
    int tested = 0;
    for (int i = 0; i < 4000 && tested < 400; ++i) {
        const double x = rng.uniform(0.01, 6.0);
        const double y = rng.uniform(-0.995, 0.995);
        const double z = 1.0;
        const double gx = gamma_eval(sol, x).value;
        if (std::abs(std::abs(y) - gx) < 2e-3) continue;
        if (std::abs(x + std::abs(y) - 1.0) < 2e-3) continue;
        if (std::abs(y) < 2e-3) continue;
        const double h = 1e-6 * std::max(1.0, x);
        const Grad2 g = U_grad(sol, {x, y, z});
        const double fdx =
            (U_eval(sol, {x + h, y, z}) - U_eval(sol, {x - h, y, z})) / (2.0 * h);
        const double fdy =
            (U_eval(sol, {x, y + h, z}) - U_eval(sol, {x, y - h, z})) / (2.0 * h);
        CHECK(std::abs(g.dx - fdx) <= 1e-6 * std::max(1.0, std::abs(g.dx)));
        CHECK(std::abs(g.dy - fdy) <= 1e-6 * std::max(1.0, std::abs(g.dy)));
        ++tested;
    }
    CHECK(tested >= 350);
}

TEST_CASE("gradient on the |y| > z chart") {
    const GammaSolution sol = solve_default(2.0, 1.0);
    const double h = 1e-7;
    for (double y : {1.4, -1.7}) {
        const Point3 pt{0.8, y, 0.6};
        const Grad2 g = U_grad(sol, pt);
        const double fdx = (U_eval(sol, {pt.x + h, y, 0.6}) -
                            U_eval(sol, {pt.x - h, y, 0.6})) / (2.0 * h);
        const double fdy = (U_eval(sol, {pt.x, y + h, 0.6}) -
                            U_eval(sol, {pt.x, y - h, 0.6})) / (2.0 * h);
        CHECK(g.dx == doctest::Approx(fdx).epsilon(1e-6));
        CHECK(g.dy == doctest::Approx(fdy).epsilon(1e-6));
    }
}
