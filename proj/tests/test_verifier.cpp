#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "maxineq/verifier.hpp"

using namespace maxineq;

namespace {

VerifierOptions quick_options() {
    VerifierOptions opt;
    opt.grid.nx = 80;
    opt.grid.ny = 120;
    opt.concavity_samples = 600;
    opt.t_points = 61;
    opt.chord_samples = 1500;
    opt.fd_samples = 1500;
    opt.start_points = 120;
    opt.gamma_random_points = 300;
    return opt;
}

}  // namespace

TEST_CASE("full suite passes for representative parameters") {
    for (auto [p, alpha] : {std::pair{2.0, 1.0}, {3.0, 0.5}}) {
        const std::vector<CheckReport> reports = run_full_suite(p, alpha, quick_options());
        for (const CheckReport& r : reports) {
            INFO(r.check_name, " worst=", r.worst_slack, " at ", r.worst_location);
            CHECK(r.pass);
        }
        CHECK(reports.size() >= 8);
    }
}

TEST_CASE("corrupted curve is caught") {
    VerifierOptions opt = quick_options();
    opt.corrupt_gamma = true;
    const std::vector<CheckReport> reports = run_full_suite(2.0, 1.0, opt);
    CHECK_FALSE(all_pass(reports));
}

TEST_CASE("majorization equality at the tangency point") {
    // px = 1/((p-1)(alpha+1)) with px + (p|y|-1) = 1 sits on the D0 seam,
    // where the slack vanishes identically
    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 16.0, 1e-9);
    const double Xf = 1.0 / ((prm.p - 1.0) * (prm.alpha + 1.0));
    const double x = Xf / prm.p;
    const double ay = (2.0 - Xf) / prm.p;
    CHECK(classify(sol, x, ay) == Region::D0);
    const double slack =
        u_eval(sol, x, ay) - (1.0 - std::pow(prm.cap1 * x, prm.p));
    CHECK(std::abs(slack) < 1e-9);
}

TEST_CASE("majorization grid check") {
    const GammaSolution sol = solve_gamma(make_params(2.0, 1.0), 24.0, 1e-9);
    GridSpec spec;
    spec.nx = 100;
    spec.ny = 160;
    const CheckReport r = check_majorization(sol, spec);
    CHECK(r.pass);
    CHECK(r.worst_slack >= -1e-9);
    CHECK(r.grid_size > 10000);
}

TEST_CASE("line concavity and chord domination") {
    const GammaSolution sol = solve_gamma(make_params(2.5, 0.5), 24.0, 1e-9);
    const CheckReport conc = check_line_concavity(sol, 800, 81, 42);
    INFO("concavity worst ", conc.worst_slack);
    CHECK(conc.pass);
    const CheckReport chord = check_chord_domination(sol, 3000, 43);
    INFO("chord worst ", chord.worst_slack);
    CHECK(chord.pass);
}

TEST_CASE("derivative inequality over the strip") {
    const GammaSolution sol = solve_gamma(make_params(3.0, 0.25), 24.0, 1e-9);
    GridSpec spec;
    spec.nx = 90;
    spec.ny = 130;
    const CheckReport r = check_derivative_inequality(sol, spec);
    INFO("worst ", r.worst_slack, " at ", r.worst_location);
    CHECK(r.pass);
}

TEST_CASE("start condition on [1, 100]") {
    const GammaSolution sol = solve_gamma(make_params(2.0, 1.0), 103.0, 1e-9);
    std::vector<double> xs;
    for (int i = 0; i <= 200; ++i) xs.push_back(1.0 + 99.0 * i / 200.0);
    const CheckReport r = check_start_condition(sol, xs);
    CHECK(r.pass);
    CHECK_THROWS_AS(check_start_condition(sol, {0.5}), std::invalid_argument);
}

TEST_CASE("empirical growth constant is finite and refinement-stable") {
    const GammaSolution sol = solve_gamma(make_params(2.0, 1.0), 64.0, 1e-9);
    const double k1 = empirical_bound_constant(sol, 16);
    const double k2 = empirical_bound_constant(sol, 32);
    CHECK(std::isfinite(k1));
    CHECK(k1 >= 1.0);
    CHECK(std::abs(k2 - k1) / k1 < 0.10);
}

TEST_CASE("reports serialize to JSON lines") {
    const GammaSolution sol = solve_gamma(make_params(2.0, 1.0), 16.0, 1e-9);
    GridSpec spec;
    spec.nx = 30;
    spec.ny = 40;
    const CheckReport r = check_majorization(sol, spec);
    const std::string line = report_to_json_line(r);
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("check").get<std::string>() == "majorization");
    CHECK(j.at("verdict").get<std::string>() == "pass");
    CHECK(j.at("p").get<double>() == 2.0);
    CHECK(j.at("tolerance").get<double>() == 1e-9);
}

TEST_CASE("checks are deterministic for a fixed seed") {
    const GammaSolution sol = solve_gamma(make_params(2.0, 1.0), 24.0, 1e-9);
    const CheckReport a = check_line_concavity(sol, 400, 61, 99);
    const CheckReport b = check_line_concavity(sol, 400, 61, 99);
    CHECK(a.worst_slack == b.worst_slack);
    CHECK(a.worst_location == b.worst_location);
}
