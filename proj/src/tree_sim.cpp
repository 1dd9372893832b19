#include "maxineq/tree_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "maxineq/rng.hpp"

namespace maxineq {

namespace {

constexpr double kTreeTol = 1e-12;

void validate(TreeMode mode, bool alpha_strong, double alpha, double f0,
              const std::vector<TreeNode>& nodes, std::int32_t root) {
    if (alpha_strong && !(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("tree: alpha-strong mode needs alpha in [0,1]");
    const std::int32_t n = static_cast<std::int32_t>(nodes.size());
    if (root >= n) throw std::invalid_argument("tree: root index out of range");
    if (root < 0) {
        if (mode == TreeMode::Submartingale && f0 < -kTreeTol)
            throw std::invalid_argument("tree: negative f0 in submartingale mode");
        return;
    }
    std::vector<char> seen(nodes.size(), 0);
    // (node, incoming f); children must carry larger indices than the parent,
    // which rules out cycles and sharing
    std::vector<std::pair<std::int32_t, double>> stack{{root, f0}};
    seen[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty()) {
        const auto [idx, f] = stack.back();
        stack.pop_back();
        const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
        if (node.branches.empty())
            throw std::invalid_argument("tree: node without branches (use child=-1 leaves)");
        double psum = 0.0, drift = 0.0, gdrift = 0.0, scale = 0.0;
        for (const TreeBranch& b : node.branches) {
            if (!(b.prob > 0.0 && b.prob <= 1.0 + kTreeTol))
                throw std::invalid_argument("tree: branch probability outside (0,1]");
            psum += b.prob;
            drift += b.prob * b.df;
            gdrift += b.prob * b.dg;
            scale = std::max({scale, std::abs(b.df), std::abs(b.dg)});
            if (std::abs(b.dg) > std::abs(b.df) + kTreeTol * std::max(1.0, scale))
                throw std::invalid_argument("tree: |dg| > |df| breaks differential subordination");
            if (mode == TreeMode::Submartingale && f + b.df < -kTreeTol * std::max(1.0, std::abs(f)))
                throw std::invalid_argument("tree: f leaves [0,inf) in submartingale mode");
            if (b.child >= 0) {
                if (b.child <= idx || b.child >= n)
                    throw std::invalid_argument("tree: child indices must increase");
                if (seen[static_cast<std::size_t>(b.child)])
                    throw std::invalid_argument("tree: node reachable twice");
                seen[static_cast<std::size_t>(b.child)] = 1;
                stack.push_back({b.child, f + b.df});
            }
        }
        const double tol = kTreeTol * std::max(1.0, scale);
        if (std::abs(psum - 1.0) > 1e-9)
            throw std::invalid_argument("tree: branch probabilities do not sum to 1");
        if (mode == TreeMode::Martingale && std::abs(drift) > tol)
            throw std::invalid_argument("tree: nonzero f-drift in martingale mode");
        if (mode == TreeMode::Submartingale && drift < -tol)
            throw std::invalid_argument("tree: negative f-drift in submartingale mode");
        if (alpha_strong && std::abs(gdrift) > alpha * std::max(drift, 0.0) + tol)
            throw std::invalid_argument("tree: alpha-strong drift condition violated");
    }
    if (mode == TreeMode::Submartingale && f0 < -kTreeTol)
        throw std::invalid_argument("tree: negative f0 in submartingale mode");
}

int compute_depth(const std::vector<TreeNode>& nodes, std::int32_t root) {
    if (root < 0) return 0;
    int depth = 0;
    std::vector<std::pair<std::int32_t, int>> stack{{root, 1}};
    while (!stack.empty()) {
        const auto [idx, d] = stack.back();
        stack.pop_back();
        depth = std::max(depth, d);
        for (const TreeBranch& b : nodes[static_cast<std::size_t>(idx)].branches)
            if (b.child >= 0) stack.push_back({b.child, d + 1});
    }
    return depth;
}

}  // namespace

double ratio_vs_fstar(const MomentSummary& m) {
    return std::pow(m.e_gstar_p / m.e_fstar_p, 1.0 / m.p);
}

FiniteAdaptedTree FiniteAdaptedTree::create(TreeMode mode, bool alpha_strong,
                                            double alpha, double f0, double g0,
                                            std::vector<TreeNode> nodes,
                                            std::int32_t root) {
    validate(mode, alpha_strong, alpha, f0, nodes, root);
    FiniteAdaptedTree t;
    t.mode_ = mode;
    t.alpha_strong_ = alpha_strong;
    t.alpha_ = alpha;
    t.f0_ = f0;
    t.g0_ = g0;
    t.root_ = root;
    t.nodes_ = std::move(nodes);
    t.depth_ = compute_depth(t.nodes_, root);
    return t;
}

long FiniteAdaptedTree::path_count(long cap) const {
    if (root_ < 0) return 1;
    // children always have larger indices, so a reverse sweep is a valid DP
    std::vector<long> cnt(nodes_.size(), 0);
    for (std::int32_t i = static_cast<std::int32_t>(nodes_.size()) - 1; i >= 0; --i) {
        long c = 0;
        for (const TreeBranch& b : nodes_[static_cast<std::size_t>(i)].branches) {
            c += (b.child < 0) ? 1 : cnt[static_cast<std::size_t>(b.child)];
            if (c >= cap) {
                c = cap;
                break;
            }
        }
        cnt[static_cast<std::size_t>(i)] = c;
    }
    return cnt[static_cast<std::size_t>(root_)];
}

FiniteAdaptedTree FiniteAdaptedTree::shifted(double eps) const {
    FiniteAdaptedTree t = *this;
    t.f0_ += eps;
    t.g0_ += eps;
    validate(t.mode_, t.alpha_strong_, t.alpha_, t.f0_, t.nodes_, t.root_);
    return t;
}

namespace {

nlohmann::json node_to_json(const std::vector<TreeNode>& nodes, std::int32_t idx,
                            int depth) {
    if (depth > 1000)
        throw std::invalid_argument("tree: too deep for nested JSON serialization");
    nlohmann::json jn;
    jn["branches"] = nlohmann::json::array();
    for (const TreeBranch& b : nodes[static_cast<std::size_t>(idx)].branches) {
        nlohmann::json jb;
        jb["prob"] = b.prob;
        jb["df"] = b.df;
        jb["dg"] = b.dg;
        jb["child"] = (b.child < 0) ? nlohmann::json()
                                    : node_to_json(nodes, b.child, depth + 1);
        jn["branches"].push_back(std::move(jb));
    }
    return jn;
}

std::int32_t node_from_json(const nlohmann::json& jn, std::vector<TreeNode>& nodes,
                            int depth) {
    if (depth > 1000) throw std::invalid_argument("tree JSON: nesting too deep");
    const std::int32_t idx = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    // fill after recursion; index stays stable because children append
    std::vector<TreeBranch> branches;
    for (const nlohmann::json& jb : jn.at("branches")) {
        TreeBranch b;
        b.prob = jb.at("prob").get<double>();
        b.df = jb.at("df").get<double>();
        b.dg = jb.at("dg").get<double>();
        b.child = jb.at("child").is_null()
                      ? -1
                      : node_from_json(jb.at("child"), nodes, depth + 1);
        branches.push_back(b);
    }
    nodes[static_cast<std::size_t>(idx)].branches = std::move(branches);
    return idx;
}

}  // namespace

std::string FiniteAdaptedTree::to_json() const {
    nlohmann::json j;
    j["format"] = "maxineq-tree/1";
    j["mode"] = (mode_ == TreeMode::Martingale) ? "martingale" : "submartingale";
    j["alpha_strong"] = alpha_strong_;
    j["alpha"] = alpha_;
    j["root_state"] = {{"f0", f0_}, {"g0", g0_}};
    j["tree"] = (root_ < 0) ? nlohmann::json() : node_to_json(nodes_, root_, 0);
    return j.dump();
}

FiniteAdaptedTree FiniteAdaptedTree::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "maxineq-tree/1")
        throw std::invalid_argument("tree JSON: unknown format");
    const std::string mode_s = j.at("mode").get<std::string>();
    TreeMode mode;
    if (mode_s == "martingale") mode = TreeMode::Martingale;
    else if (mode_s == "submartingale") mode = TreeMode::Submartingale;
    else throw std::invalid_argument("tree JSON: unknown mode " + mode_s);
    std::vector<TreeNode> nodes;
    std::int32_t root = -1;
    if (!j.at("tree").is_null()) root = node_from_json(j.at("tree"), nodes, 0);
    return create(mode, j.at("alpha_strong").get<bool>(), j.at("alpha").get<double>(),
                  j.at("root_state").at("f0").get<double>(),
                  j.at("root_state").at("g0").get<double>(), std::move(nodes), root);
}

MomentSummary exact_moments(const FiniteAdaptedTree& tree, double p, long path_limit) {
    if (tree.path_count(path_limit + 1) > path_limit)
        throw std::runtime_error(
            "exact_moments: path count exceeds limit; use the Monte Carlo estimator");

    long double eg = 0.0L, ef = 0.0L, efs = 0.0L;
    auto add_leaf = [&](long double prob, double f, double fs, double gs) {
        eg += prob * powl(static_cast<long double>(gs), static_cast<long double>(p));
        ef += prob * powl(static_cast<long double>(std::abs(f)), static_cast<long double>(p));
        efs += prob * powl(static_cast<long double>(fs), static_cast<long double>(p));
    };

    const double f0 = tree.f0(), g0 = tree.g0();
    if (tree.root() < 0) {
        add_leaf(1.0L, f0, std::abs(f0), std::abs(g0));
    } else {
        struct Frame {
            std::int32_t node;
            std::uint32_t next;
            long double prob;
            double f, g, fs, gs;
        };
        std::vector<Frame> stack;
        stack.push_back({tree.root(), 0, 1.0L, f0, g0, std::abs(f0), std::abs(g0)});
        const std::vector<TreeNode>& nodes = tree.nodes();
        while (!stack.empty()) {
            Frame& fr = stack.back();
            const TreeNode& node = nodes[static_cast<std::size_t>(fr.node)];
            if (fr.next >= node.branches.size()) {
                stack.pop_back();
                continue;
            }
            const TreeBranch& b = node.branches[fr.next++];
            const long double prob = fr.prob * static_cast<long double>(b.prob);
            const double f = fr.f + b.df;
            const double g = fr.g + b.dg;
            const double fs = std::max(fr.fs, std::abs(f));
            const double gs = std::max(fr.gs, std::abs(g));
            if (b.child < 0) add_leaf(prob, f, fs, gs);
            else stack.push_back({b.child, 0, prob, f, g, fs, gs});
        }
    }

    MomentSummary m;
    m.p = p;
    m.e_gstar_p = static_cast<double>(eg);
    m.e_f_p = static_cast<double>(ef);
    m.e_fstar_p = static_cast<double>(efs);
    m.ratio = (ef > 0.0L) ? static_cast<double>(powl(eg / ef, 1.0L / static_cast<long double>(p)))
                          : std::numeric_limits<double>::infinity();
    return m;
}

FiniteAdaptedTree build_transform_tree(const MartingaleSkeleton& f_tree,
                                       const std::vector<double>& signs) {
    for (double v : signs)
        if (std::abs(v) > 1.0)
            throw std::invalid_argument("build_transform_tree: |v| > 1 is not allowed");
    if (signs.empty()) throw std::invalid_argument("build_transform_tree: empty sign sequence");

    std::vector<TreeNode> nodes = f_tree.nodes;
    if (f_tree.root >= 0) {
        // assign dg = v_{d+1} df on branches out of depth-d nodes
        std::vector<std::pair<std::int32_t, int>> stack{{f_tree.root, 0}};
        while (!stack.empty()) {
            const auto [idx, d] = stack.back();
            stack.pop_back();
            if (static_cast<std::size_t>(d + 1) >= signs.size())
                throw std::invalid_argument("build_transform_tree: sign sequence shorter than depth");
            for (TreeBranch& b : nodes[static_cast<std::size_t>(idx)].branches) {
                b.dg = signs[static_cast<std::size_t>(d + 1)] * b.df;
                if (b.child >= 0) stack.push_back({b.child, d + 1});
            }
        }
    }
    const double g0 = signs[0] * f_tree.f0;
    return FiniteAdaptedTree::create(TreeMode::Martingale, false, 0.0, f_tree.f0, g0,
                                     std::move(nodes), f_tree.root);
}

CheckReport check_supermartingale_U(const FiniteAdaptedTree& tree,
                                    const GammaSolution& sol, double tol) {
    if (tree.mode() != TreeMode::Submartingale || !tree.alpha_strong())
        throw std::invalid_argument(
            "check_supermartingale_U: needs a submartingale-mode alpha-strong tree");
    if (std::abs(tree.alpha() - sol.params.alpha) > 1e-12)
        throw std::invalid_argument("check_supermartingale_U: tree alpha != solution alpha");

    double worst = -1e300;
    std::string wloc = "root";
    const double f0 = tree.f0(), g0 = tree.g0();
    if (!(f0 > 0.0))
        throw std::invalid_argument("check_supermartingale_U: needs f > 0 (apply shifted())");
    if (!(std::abs(g0) > 0.0))
        throw std::invalid_argument("check_supermartingale_U: needs |g0| > 0 (apply shifted())");

    if (f0 >= g0 && g0 > 0.0) {
        const double root_val = U_eval(sol, {f0, g0, std::abs(g0)});
        const double v = root_val / std::max(1.0, std::abs(root_val));
        if (v > worst) {
            worst = v;
            wloc = "root_value";
        }
    }

    long n_nodes = 0;
    if (tree.root() >= 0) {
        struct Frame {
            std::int32_t node;
            std::uint32_t next;
            double f, g, gs;
        };
        std::vector<Frame> stack;
        stack.push_back({tree.root(), 0, f0, g0, std::abs(g0)});
        const std::vector<TreeNode>& nodes = tree.nodes();
        while (!stack.empty()) {
            Frame& fr = stack.back();
            const TreeNode& node = nodes[static_cast<std::size_t>(fr.node)];
            if (fr.next == 0) {
                ++n_nodes;
                if (!(fr.f > 0.0))
                    throw std::invalid_argument(
                        "check_supermartingale_U: f must stay strictly positive");
                const double parent = U_eval(sol, {fr.f, fr.g, fr.gs});
                double lhs = 0.0;
                for (const TreeBranch& b : node.branches) {
                    const double g = fr.g + b.dg;
                    lhs += b.prob * U_eval(sol, {fr.f + b.df, g, std::max(fr.gs, std::abs(g))});
                }
                const double slack = (lhs - parent) / std::max(1.0, std::abs(parent));
                if (slack > worst) {
                    worst = slack;
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "node=%d", fr.node);
                    wloc = buf;
                }
            }
            if (fr.next >= node.branches.size()) {
                stack.pop_back();
                continue;
            }
            const TreeBranch& b = node.branches[fr.next++];
            if (b.child >= 0) {
                const double g = fr.g + b.dg;
                stack.push_back({b.child, 0, fr.f + b.df, g, std::max(fr.gs, std::abs(g))});
            }
        }
    }
    return CheckReport::make("supermartingale_U", sol.params, n_nodes, worst, wloc, tol,
                             SlackKind::LE);
}

FiniteAdaptedTree random_transform_martingale(std::uint64_t seed, int max_depth,
                                              int max_branch) {
    Rng rng(seed);
    const double f0 = rng.uniform(0.5, 2.0);
    std::vector<double> signs(static_cast<std::size_t>(max_depth) + 1);
    for (double& v : signs) v = rng.coin_sign();

    MartingaleSkeleton sk;
    sk.f0 = f0;
    struct Todo {
        std::int32_t node;
        int depth;
    };
    sk.nodes.emplace_back();
    sk.root = 0;
    std::vector<Todo> todo{{0, 0}};
    while (!todo.empty()) {
        const Todo t = todo.back();
        todo.pop_back();
        const int k = std::min(max_branch, 2 + static_cast<int>(rng.next_u64() % 2));
        std::vector<double> w(static_cast<std::size_t>(k));
        double wsum = 0.0;
        for (double& x : w) {
            x = rng.uniform(0.2, 1.0);
            wsum += x;
        }
        std::vector<TreeBranch> branches(static_cast<std::size_t>(k));
        double drift = 0.0, psum = 0.0;
        for (int i = 0; i < k; ++i) {
            TreeBranch& b = branches[static_cast<std::size_t>(i)];
            b.prob = (i + 1 == k) ? (1.0 - psum) : w[static_cast<std::size_t>(i)] / wsum;
            psum += b.prob;
            b.df = 0.4 * rng.next_normal();
            drift += b.prob * b.df;
            b.child = -1;
        }
        for (TreeBranch& b : branches) b.df -= drift;
        for (TreeBranch& b : branches) b.dg = 0.0;  // assigned by the transform
        const bool grow = t.depth + 1 < max_depth &&
                          (t.depth < 2 || rng.next_double() < 0.75);
        if (grow) {
            for (TreeBranch& b : branches) {
                b.child = static_cast<std::int32_t>(sk.nodes.size());
                sk.nodes.emplace_back();
                todo.push_back({b.child, t.depth + 1});
            }
        }
        sk.nodes[static_cast<std::size_t>(t.node)].branches = std::move(branches);
    }
    return build_transform_tree(sk, signs);
}

FiniteAdaptedTree random_alpha_strong_submartingale(std::uint64_t seed, double alpha,
                                                    int max_depth, int max_branch) {
    Rng rng(seed);
    const double f0 = rng.uniform(0.5, 2.0);
    const double g0 = rng.coin_sign() * rng.uniform(0.3, 1.0) * f0;

    std::vector<TreeNode> nodes;
    struct Todo {
        std::int32_t node;
        int depth;
        double f;
    };
    nodes.emplace_back();
    std::vector<Todo> todo{{0, 0, f0}};
    while (!todo.empty()) {
        const Todo t = todo.back();
        todo.pop_back();
        const int k = std::min(max_branch, 2 + static_cast<int>(rng.next_u64() % 2));
        std::vector<double> w(static_cast<std::size_t>(k));
        double wsum = 0.0;
        for (double& x : w) {
            x = rng.uniform(0.2, 1.0);
            wsum += x;
        }
        std::vector<TreeBranch> branches(static_cast<std::size_t>(k));
        double psum = 0.0, drift = 0.0;
        for (int i = 0; i < k; ++i) {
            TreeBranch& b = branches[static_cast<std::size_t>(i)];
            b.prob = (i + 1 == k) ? (1.0 - psum) : w[static_cast<std::size_t>(i)] / wsum;
            psum += b.prob;
            b.df = std::max(0.3 * rng.next_normal(), -0.9 * t.f);
            drift += b.prob * b.df;
            b.child = -1;
        }
        if (drift < 0.0) {
            for (TreeBranch& b : branches) b.df -= drift;
            drift = 0.0;
            for (const TreeBranch& b : branches) drift += b.prob * b.df;
        }
        double gdrift = 0.0;
        for (TreeBranch& b : branches) {
            b.dg = rng.uniform(-1.0, 1.0) * b.df;
            gdrift += b.prob * b.dg;
        }
        const double cap = alpha * std::max(drift, 0.0);
        if (std::abs(gdrift) > cap) {
            const double lam = (std::abs(gdrift) > 0.0) ? cap / std::abs(gdrift) : 0.0;
            for (TreeBranch& b : branches) b.dg *= lam;
        }
        const bool grow = t.depth + 1 < max_depth &&
                          (t.depth < 2 || rng.next_double() < 0.75);
        if (grow) {
            for (TreeBranch& b : branches) {
                b.child = static_cast<std::int32_t>(nodes.size());
                nodes.emplace_back();
                todo.push_back({b.child, t.depth + 1, t.f + b.df});
            }
        }
        nodes[static_cast<std::size_t>(t.node)].branches = std::move(branches);
    }
    return FiniteAdaptedTree::create(TreeMode::Submartingale, true, alpha, f0, g0,
                                     std::move(nodes), 0);
}

}  // namespace maxineq
