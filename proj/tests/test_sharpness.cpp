#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "maxineq/sharpness.hpp"

using namespace maxineq;

TEST_CASE("rate functions vanish to second order at zero") {
    for (auto [p, alpha] : {std::pair{2.0, 1.0}, {3.0, 0.5}, {4.0, 0.25}}) {
        const RateValues at0 = rate_functions(0.0, p, alpha);
        CHECK(std::abs(at0.F) < 1e-15);
        CHECK(std::abs(at0.G) < 1e-15);
        const double h = 1e-5;
        const RateValues up = rate_functions(h, p, alpha);
        const RateValues dn = rate_functions(-h, p, alpha);
        CHECK(std::abs((up.F - dn.F) / (2.0 * h)) < 1e-8);
        CHECK(std::abs((up.G - dn.G) / (2.0 * h)) < 1e-8);
    }
}

TEST_CASE("rate function value by direct substitution") {
    // p = 2: F(0.1) = 1 - (0.9 * 1.44) / (1.1 * 1.2)
    const RateValues rv = rate_functions(0.1, 2.0, 1.0);
    CHECK(rv.F == doctest::Approx(1.0 - 0.9 * 1.44 / (1.1 * 1.2)).epsilon(1e-14));
    CHECK_THROWS_AS(rate_functions(-0.5, 2.0, 1.0), std::domain_error);
}

TEST_CASE("martingale witness structure") {
    const double p = 2.0, delta = 0.1;
    const FiniteAdaptedTree t = build_extremal_martingale(p, delta, 3);
    CHECK(t.mode() == TreeMode::Martingale);
    CHECK(t.f0() == 1.0);
    CHECK(t.g0() == 1.0);
    CHECK(t.depth() == 2 * 3 + 1);
    CHECK(t.path_count(1000) == 2 * 3 + 2);
    // first split carries the zero-drift weights 1/(1+p d) and p d/(1+p d)
    const TreeNode& entry = t.nodes()[0];
    REQUIRE(entry.branches.size() == 2);
    const std::int32_t first = entry.branches[0].child;
    REQUIRE(first >= 0);
    const TreeNode& split = t.nodes()[static_cast<std::size_t>(first)];
    REQUIRE(split.branches.size() == 2);
    CHECK(split.branches[0].prob ==
          doctest::Approx(1.0 / (1.0 + p * delta)).epsilon(1e-15));
    CHECK(split.branches[1].prob ==
          doctest::Approx(p * delta / (1.0 + p * delta)).epsilon(1e-15));
    // moves are a +-1 transform with exact zero drift
    for (const TreeNode& node : t.nodes()) {
        double drift = 0.0, scale = 0.0;
        for (const TreeBranch& b : node.branches) {
            CHECK(std::abs(b.dg) == std::abs(b.df));
            drift += b.prob * b.df;
            scale = std::max(scale, std::abs(b.df));
        }
        CHECK(std::abs(drift) <= 1e-15 * std::max(1.0, scale));
    }
}

TEST_CASE("submartingale witness structure") {
    const double p = 2.0, alpha = 1.0, delta = 0.05;
    const FiniteAdaptedTree t = build_extremal_submartingale(p, alpha, delta, 4);
    CHECK(t.mode() == TreeMode::Submartingale);
    CHECK(t.alpha_strong());
    // drift moves are tight for the alpha-strong constraint: dg = alpha df
    long drift_nodes = 0;
    for (const TreeNode& node : t.nodes()) {
        if (node.branches.size() == 1) {
            const TreeBranch& b = node.branches[0];
            CHECK(b.prob == 1.0);
            CHECK(b.df > 0.0);
            CHECK(b.dg == doctest::Approx(alpha * b.df).epsilon(1e-15));
            ++drift_nodes;
        }
    }
    CHECK(drift_nodes == 4);
}

TEST_CASE("builder preconditions") {
    CHECK_THROWS_AS(build_extremal_martingale(2.0, 0.5, 10), std::domain_error);
    CHECK_THROWS_AS(build_extremal_martingale(2.0, -0.1, 10), std::domain_error);
    CHECK_THROWS_AS(build_extremal_martingale(2.0, 0.1, 0), std::domain_error);
    // the split weight leaves (0,1) at delta = 1/((alpha+1)p - alpha) already
    CHECK_THROWS_AS(build_extremal_submartingale(2.0, 1.0, 0.4, 10), std::domain_error);
    CHECK_THROWS_AS(build_extremal_submartingale(2.0, 1.5, 0.01, 10), std::domain_error);
}

TEST_CASE("ratios stay under the bounds and grow with rounds") {
    // truncation consistency at fixed delta: more rounds help, geometrically
    const std::vector<long> rounds = {200, 400, 800, 1600};
    double prev = 0.0, prev_inc = 1e300;
    for (long r : rounds) {
        const auto rows = ratio_sweep(SharpnessMode::Martingale, 2.0, 1.0, {0.05}, {r});
        const double ratio = rows[0].ratio;
        CHECK(ratio <= 2.0);
        CHECK(ratio > prev);
        if (prev > 0.0) {
            const double inc = ratio - prev;
            CHECK(inc < prev_inc);
            prev_inc = inc;
        }
        prev = ratio;
    }
    // frozen enumeration value for (delta, rounds) = (0.05, 800)
    const auto rows = ratio_sweep(SharpnessMode::Martingale, 2.0, 1.0, {0.05}, {800});
    CHECK(rows[0].ratio == doctest::Approx(1.90977985).epsilon(1e-7));
}

TEST_CASE("delta refinement approaches the martingale constant") {
    const auto rows =
        ratio_sweep(SharpnessMode::Martingale, 2.0, 1.0, {0.1, 0.05, 0.025}, {});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ratio < rows[1].ratio);
    CHECK(rows[1].ratio < rows[2].ratio);
    for (const SharpnessRow& r : rows) {
        CHECK(r.ratio < 2.0);
        CHECK(r.ratio_strong < 2.0);
    }
    CHECK(rows[2].ratio > 1.94);  // frozen from the enumeration (1.949131)
}

TEST_CASE("submartingale refinement approaches (alpha+1)p") {
    const auto rows =
        ratio_sweep(SharpnessMode::Submartingale, 2.0, 1.0, {0.02, 0.01}, {});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ratio < rows[1].ratio);
    for (const SharpnessRow& r : rows) CHECK(r.ratio < 4.0);
    CHECK(rows[1].ratio > 3.43);  // frozen from the enumeration (3.442690)
}

TEST_CASE("other exponents stay under their bounds") {
    const auto rows = ratio_sweep(SharpnessMode::Martingale, 3.0, 1.0, {0.02}, {});
    CHECK(rows[0].ratio < 3.0);
    CHECK(rows[0].ratio > 2.7);  // frozen from the enumeration (2.731224)
    const auto sub = ratio_sweep(SharpnessMode::Submartingale, 2.5, 0.5, {0.02}, {1000});
    CHECK(sub[0].ratio < 1.5 * 2.5);
}

TEST_CASE("sweep outputs") {
    const auto rows = ratio_sweep(SharpnessMode::Martingale, 2.0, 1.0, {0.1, 0.05}, {});
    const std::string csv = sweep_to_csv(SharpnessMode::Martingale, 2.0, 1.0, rows);
    CHECK(csv.rfind("mode,p,alpha,delta,rounds,e_gstar_p,e_fstar_p,ratio\n", 0) == 0);
    CHECK(csv.find("martingale,2,") != std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(
        sweep_summary_json(SharpnessMode::Martingale, 2.0, 1.0, rows));
    CHECK(j.at("bound").get<double>() == 2.0);
    CHECK(j.at("final_ratio").get<double>() == rows.back().ratio);
    const double extrap = j.at("extrapolated_limit").get<double>();
    CHECK(extrap > rows.back().ratio);
    CHECK(extrap < 2.1);
}

TEST_CASE("default round heuristics") {
    CHECK(default_rounds(SharpnessMode::Martingale, 0.1) == 400);
    CHECK(default_rounds(SharpnessMode::Submartingale, 0.01) == 5000);
    CHECK_THROWS_AS(default_rounds(SharpnessMode::Martingale, 0.0), std::domain_error);
}
