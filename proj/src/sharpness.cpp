#include "maxineq/sharpness.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace maxineq {

namespace {

// appends a two-branch node; returns its index
std::int32_t push_node(std::vector<TreeNode>& nodes, TreeBranch b1, TreeBranch b2) {
    nodes.push_back(TreeNode{{b1, b2}});
    return static_cast<std::int32_t>(nodes.size()) - 1;
}

}  // namespace

FiniteAdaptedTree build_extremal_martingale(double p, double delta, long rounds) {
    if (!(delta > 0.0 && delta < 1.0 / p))
        throw std::domain_error("build_extremal_martingale: need 0 < delta < 1/p");
    if (rounds < 1) throw std::domain_error("build_extremal_martingale: rounds >= 1");

    std::vector<TreeNode> nodes;
    nodes.reserve(static_cast<std::size_t>(2 * rounds) + 1);

    // entry split from (1,1): slope -1 move of size 1 onto (0,2), the other
    // branch absorbed at (2,0)
    nodes.push_back(TreeNode{});
    std::int32_t prev = 0;
    int prev_branch = 0;  // which branch of prev links to the next node

    double scale = 2.0;  // g-coordinate of the current surviving state (0, scale)
    for (long r = 0; r < rounds; ++r) {
        const double x_b = delta * scale;  // position after the upward move
        // slope +1 split at (0, scale)
        const double df_a1 = x_b;
        const double df_a2 = -scale / p;
        const std::int32_t node_a = push_node(
            nodes, TreeBranch{1.0 / (1.0 + p * delta), df_a1, df_a1, -1},
            TreeBranch{p * delta / (1.0 + p * delta), df_a2, df_a2, -1});
        // slope -1 split at (x_b, (1+delta) scale)
        const double df_b1 = -x_b;
        const double df_b2 = (1.0 / p + delta * (1.0 / p - 1.0)) * scale;
        const std::int32_t node_b = push_node(
            nodes,
            TreeBranch{(1.0 + delta - p * delta) / (1.0 + delta), df_b1, -df_b1, -1},
            TreeBranch{p * delta / (1.0 + delta), df_b2, -df_b2, -1});
        nodes[static_cast<std::size_t>(node_a)].branches[0].child = node_b;
        if (r == 0) {
            nodes[0].branches = {TreeBranch{0.5, -1.0, 1.0, node_a},
                                 TreeBranch{0.5, 1.0, -1.0, -1}};
        } else {
            nodes[static_cast<std::size_t>(prev)].branches[static_cast<std::size_t>(prev_branch)]
                .child = node_a;
        }
        prev = node_b;
        prev_branch = 0;
        scale *= 1.0 + 2.0 * delta;
    }
    return FiniteAdaptedTree::create(TreeMode::Martingale, false, 0.0, 1.0, 1.0,
                                     std::move(nodes), 0);
}

FiniteAdaptedTree build_extremal_submartingale(double p, double alpha, double delta,
                                               long rounds) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("build_extremal_submartingale: alpha in (0,1]");
    if (!(delta > 0.0 && delta < 1.0 / p))
        throw std::domain_error("build_extremal_submartingale: need 0 < delta < 1/p");
    const double cap1 = (alpha + 1.0) * p;
    if (!(1.0 + alpha * delta - delta * cap1 > 0.0))
        throw std::domain_error(
            "build_extremal_submartingale: delta too large, split weight leaves (0,1)");
    if (rounds < 1) throw std::domain_error("build_extremal_submartingale: rounds >= 1");

    std::vector<TreeNode> nodes;
    nodes.reserve(static_cast<std::size_t>(2 * rounds) + 1);
    nodes.push_back(TreeNode{});
    std::int32_t prev = 0;
    int prev_branch = 0;

    double scale = 2.0;
    for (long r = 0; r < rounds; ++r) {
        const double x_d = delta * scale;
        // deterministic drift move (d, alpha d), tight for the alpha-strong bound
        const std::int32_t node_d = static_cast<std::int32_t>(nodes.size());
        nodes.push_back(TreeNode{{TreeBranch{1.0, x_d, alpha * x_d, -1}}});
        // zero-drift split at (x_d, (1+alpha d) scale), slope -1
        const double denom = 1.0 + alpha * delta;
        const double x_abs = denom / cap1 * scale;
        const double df_s1 = -x_d;
        const double df_s2 = x_abs - x_d;
        const std::int32_t node_s = push_node(
            nodes,
            TreeBranch{(denom - delta * cap1) / denom, df_s1, -df_s1, -1},
            TreeBranch{delta * cap1 / denom, df_s2, -df_s2, -1});
        nodes[static_cast<std::size_t>(node_d)].branches[0].child = node_s;
        if (r == 0) {
            nodes[0].branches = {TreeBranch{0.5, -1.0, 1.0, node_d},
                                 TreeBranch{0.5, 1.0, -1.0, -1}};
        } else {
            nodes[static_cast<std::size_t>(prev)].branches[static_cast<std::size_t>(prev_branch)]
                .child = node_d;
        }
        prev = node_s;
        prev_branch = 0;
        scale *= 1.0 + (alpha + 1.0) * delta;
    }
    return FiniteAdaptedTree::create(TreeMode::Submartingale, true, alpha, 1.0, 1.0,
                                     std::move(nodes), 0);
}

RateValues rate_functions(double s, double p, double alpha) {
    if (!(s > -1.0 / p))
        throw std::domain_error("rate_functions: s must exceed -1/p");
    RateValues rv;
    rv.F = 1.0 - (1.0 + s - p * s) * std::pow(1.0 + 2.0 * s, p) /
                     ((1.0 + s) * (1.0 + p * s));
    rv.G = 1.0 - (1.0 + alpha * s - s * (alpha + 1.0) * p) / (1.0 + alpha * s) *
                     std::pow(1.0 + (alpha + 1.0) * s, p);
    return rv;
}

long default_rounds(SharpnessMode mode, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("default_rounds: delta > 0");
    const double r = (mode == SharpnessMode::Martingale) ? 40.0 / delta
                                                         : 0.5 / (delta * delta);
    return static_cast<long>(std::ceil(r));
}

double sharpness_bound(SharpnessMode mode, double p, double alpha) {
    return (mode == SharpnessMode::Martingale) ? p : (alpha + 1.0) * p;
}

std::vector<SharpnessRow> ratio_sweep(SharpnessMode mode, double p, double alpha,
                                      const std::vector<double>& deltas,
                                      const std::vector<long>& rounds) {
    if (!rounds.empty() && rounds.size() != deltas.size())
        throw std::invalid_argument("ratio_sweep: rounds list must match deltas");
    std::vector<SharpnessRow> rows;
    rows.reserve(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        const long r = rounds.empty() ? default_rounds(mode, d) : rounds[i];
        const FiniteAdaptedTree tree =
            (mode == SharpnessMode::Martingale)
                ? build_extremal_martingale(p, d, r)
                : build_extremal_submartingale(p, alpha, d, r);
        const MomentSummary m = exact_moments(tree, p);
        SharpnessRow row;
        row.delta = d;
        row.rounds = r;
        row.e_gstar_p = m.e_gstar_p;
        row.e_fstar_p = m.e_fstar_p;
        row.ratio = ratio_vs_fstar(m);
        row.ratio_strong = m.ratio;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_to_csv(SharpnessMode mode, double p, double alpha,
                         const std::vector<SharpnessRow>& rows) {
    std::string out = "mode,p,alpha,delta,rounds,e_gstar_p,e_fstar_p,ratio\n";
    char buf[256];
    const char* ms = (mode == SharpnessMode::Martingale) ? "martingale" : "submartingale";
    for (const SharpnessRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%ld,%.17g,%.17g,%.17g\n",
                      ms, p, alpha, r.delta, r.rounds, r.e_gstar_p, r.e_fstar_p, r.ratio);
        out += buf;
    }
    return out;
}

std::string sweep_summary_json(SharpnessMode mode, double p, double alpha,
                               const std::vector<SharpnessRow>& rows) {
    nlohmann::json j;
    j["mode"] = (mode == SharpnessMode::Martingale) ? "martingale" : "submartingale";
    j["p"] = p;
    j["alpha"] = alpha;
    j["bound"] = sharpness_bound(mode, p, alpha);
    j["rows"] = rows.size();
    if (!rows.empty()) {
        const SharpnessRow& last = rows.back();
        j["final_delta"] = last.delta;
        j["final_ratio"] = last.ratio;
        j["final_ratio_strong"] = last.ratio_strong;
        double extrap = last.ratio;
        if (rows.size() >= 2) {
            const SharpnessRow& prevr = rows[rows.size() - 2];
            if (prevr.delta != last.delta)
                extrap = last.ratio + (last.ratio - prevr.ratio) * last.delta /
                                          (prevr.delta - last.delta);
        }
        j["extrapolated_limit"] = extrap;
    }
    return j.dump();
}

}  // namespace maxineq
