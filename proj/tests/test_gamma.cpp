#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "maxineq/gamma.hpp"
#include "maxineq/rng.hpp"
#include "oracles.hpp"

using namespace maxineq;

TEST_CASE("derived constants") {
    const Params a = make_params(2.0, 1.0);
    CHECK(a.C == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(a.x0 == doctest::Approx(0.25).epsilon(1e-15));

    const Params b = make_params(3.0, 1.0);
    CHECK(b.x0 == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    const Params c = make_params(2.0, 0.5);
    CHECK(c.C == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(c.x0 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK(a.x0 > 0.0);
    CHECK(a.x0 <= 0.5);
}

TEST_CASE("parameter domain is enforced") {
    CHECK_THROWS_AS(make_params(1.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(make_params(2.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_params(2.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(make_params(2.0, -0.5), std::domain_error);
}

TEST_CASE("linear extension") {
    const Params p31 = make_params(3.0, 1.0);
    CHECK(gamma_linear(0.0, p31) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    // continuity with the initial value at x0
    CHECK(gamma_linear(1.0 / 6.0, p31) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));

    const Params p21 = make_params(2.0, 1.0);
    CHECK(gamma_linear_slope(p21) == doctest::Approx(1.0));
    CHECK(gamma_linear(0.1, p21) == doctest::Approx(0.6).epsilon(1e-15));

    CHECK_THROWS_AS(gamma_linear(0.3, p21), std::domain_error);
}

TEST_CASE("junction slope equals the linear slope") {
    for (auto [p, alpha] : {std::pair{2.0, 1.0}, {3.0, 1.0}, {2.5, 0.5}, {4.0, 0.25}}) {
        const Params prm = make_params(p, alpha);
        const GammaSolution sol = solve_gamma(prm, 8.0, 1e-9);
        CHECK(sol.derivs[0] == doctest::Approx(gamma_linear_slope(prm)).epsilon(1e-12));
        // C1 junction from both sides
        const GammaEval l = gamma_eval(sol, prm.x0 * (1.0 - 1e-12));
        const GammaEval r = gamma_eval(sol, prm.x0 * (1.0 + 1e-12));
        CHECK(std::abs(l.value - r.value) < 1e-10);
        CHECK(std::abs(l.deriv - r.deriv) < 1e-10);
    }
}

TEST_CASE("solution matches a fine fixed-step reference integration") {
    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 4.0, 1e-9);
    // independent classical 4th-order integration at fixed fine steps
    const double g_ref = testonly::rk4_gamma_reference(prm, 0.5, 2e-5);
    CHECK(gamma_eval(sol, 0.5).value == doctest::Approx(g_ref).epsilon(1e-9));
    const double g_ref2 = testonly::rk4_gamma_reference(prm, 3.0, 2e-5);
    CHECK(gamma_eval(sol, 3.0).value == doctest::Approx(g_ref2).epsilon(1e-9));
}

TEST_CASE("curve shape on [x0, 10] for p=3, alpha=1") {
    const Params prm = make_params(3.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 10.0, 1e-9);
    double prev_v = 0.0, prev_d = 1e300;
    for (double x = prm.x0; x <= 10.0; x += 0.01) {
        const GammaEval ge = gamma_eval(sol, x);
        CHECK(ge.value > 0.0);
        CHECK(ge.value < 1.0);
        CHECK(ge.value >= prev_v - 1e-12);       // non-decreasing
        CHECK(ge.deriv <= prev_d + 1e-9);        // concave: derivative falls
        prev_v = ge.value;
        prev_d = ge.deriv;
    }
}

TEST_CASE("interpolated ODE residual stays within tolerance") {
    for (auto [p, alpha] : {std::pair{2.0, 1.0}, {3.0, 1.0}, {4.0, 0.25}, {2.5, 0.5}}) {
        const Params prm = make_params(p, alpha);
        const GammaSolution sol = solve_gamma(prm, 32.0, 1e-9);
        Rng rng(99);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = prm.x0 + (32.0 - prm.x0) * rng.next_double();
            worst = std::max(worst, ode_residual(sol, x));
        }
        INFO("p=", p, " alpha=", alpha, " worst residual ", worst);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("derivative-gap inequality (p-2)(1-gamma) <= x gamma'") {
    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 8.0, 1e-9);
    const GammaEval ge = gamma_eval(sol, 5.0);
    CHECK(ge.value < 1.0);
    CHECK((prm.p - 2.0) * (1.0 - ge.value) - 5.0 * ge.deriv <= 1e-9);

    const Params prm4 = make_params(4.0, 0.5);
    const GammaSolution sol4 = solve_gamma(prm4, 8.0, 1e-9);
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        const double x = prm4.x0 + (8.0 - prm4.x0) * rng.next_double();
        const GammaEval g4 = gamma_eval(sol4, x);
        CHECK((prm4.p - 2.0) * (1.0 - g4.value) - x * g4.deriv <= 1e-9);
    }
}

TEST_CASE("no silent extrapolation") {
    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 4.0, 1e-9);
    CHECK_THROWS_AS(gamma_eval(sol, 4.5), std::domain_error);
    CHECK_THROWS_AS(gamma_eval(sol, -0.1), std::domain_error);
}

TEST_CASE("inverse function h") {
    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 16.0, 1e-9);

    SUBCASE("h(1) = x0") {
        CHECK(std::abs(h_eval(sol, 1.0) - prm.x0) < 1e-10);
    }
    SUBCASE("agrees with plain bisection") {
        const double hb = testonly::bisect_h_reference(sol, 2.0, 1e-12);
        CHECK(h_eval(sol, 2.0) == doctest::Approx(hb).epsilon(1e-9));
        const double hb2 = testonly::bisect_h_reference(sol, 9.5, 1e-12);
        CHECK(h_eval(sol, 9.5) == doctest::Approx(hb2).epsilon(1e-9));
    }
    SUBCASE("bounds and identities") {
        Rng rng(11);
        for (int i = 0; i < 500; ++i) {
            const double s = 1.0 + (h_domain_max(sol) - 1.0) * rng.next_double();
            const double hs = h_eval(sol, s);
            CHECK(hs >= s - 1.0 - 1e-12);
            CHECK(hs <= s + 1e-12);
            CHECK(std::abs(H_eval(sol, hs) - s) < 1e-9);
            const double x = prm.x0 + (16.0 - prm.x0) * rng.next_double();
            CHECK(std::abs(h_eval(sol, H_eval(sol, x)) - x) < 1e-9);
        }
    }
    SUBCASE("h is non-decreasing and h(s+1)-s non-increasing") {
        double prev_h = 0.0, prev_shift = 1e300;
        for (double s = 1.0; s + 1.0 <= h_domain_max(sol); s += 0.05) {
            const double hs = h_eval(sol, s);
            CHECK(hs >= prev_h - 1e-12);
            prev_h = hs;
            const double shift = h_eval(sol, s + 1.0) - s;
            CHECK(shift <= prev_shift + 1e-10);
            prev_shift = shift;
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(h_eval(sol, 0.5), std::domain_error);
        CHECK_THROWS_AS(h_eval(sol, h_domain_max(sol) + 1.0), std::domain_error);
    }
}

TEST_CASE("h' : reciprocal form, product form, finite differences") {
    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 16.0, 1e-9);

    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        const double s = 1.0 + 1e-6 + (h_domain_max(sol) - 1.1) * rng.next_double();
        const double a = h_prime(sol, s);
        CHECK(a > 0.0);
        CHECK(a <= 1.0);
        const double b = h_prime_prod(sol, s);
        CHECK(std::abs(a - b) / std::abs(a) < 1e-7);
    }
    // central finite difference at s = 3
    const double eps = 1e-6;
    const double fd = (h_eval(sol, 3.0 + eps) - h_eval(sol, 3.0 - eps)) / (2.0 * eps);
    CHECK(h_prime(sol, 3.0) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("solution JSON round-trip") {
    const Params prm = make_params(2.5, 0.5);
    const GammaSolution sol = solve_gamma(prm, 4.0, 1e-9);
    const GammaSolution back = gamma_from_json(gamma_to_json(sol));
    CHECK(back.knots.size() == sol.knots.size());
    CHECK(back.values == sol.values);
    CHECK(back.derivs == sol.derivs);
    CHECK(back.params.p == sol.params.p);
    CHECK(gamma_eval(back, 1.7).value == gamma_eval(sol, 1.7).value);
}

TEST_CASE("csv export starts at the linear segment") {
    const Params prm = make_params(3.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 4.0, 1e-9);
    const std::string csv = gamma_to_csv(sol, 0.02, 0.01);
    CHECK(csv.find("x,gamma,gamma_prime\n0,0.33333333333333331,3\n") != std::string::npos);
}
