#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxineq/check_report.hpp"
#include "maxineq/special_fn.hpp"

namespace maxineq {

enum class TreeMode { Martingale, Submartingale };

// one conditional move: with probability prob the pair steps by (df, dg);
// child < 0 means the process is absorbed after this move
struct TreeBranch {
    double prob;
    double df;
    double dg;
    std::int32_t child;
};

struct TreeNode {
    std::vector<TreeBranch> branches;
};

struct MomentSummary {
    double p = 2.0;
    double e_gstar_p = 0.0;  // E (sup_k |g_k|)^p
    double e_f_p = 0.0;      // E |f_terminal|^p  (= sup_n E|f_n|^p here)
    double e_fstar_p = 0.0;  // E (sup_k |f_k|)^p
    double ratio = 0.0;      // (e_gstar_p / e_f_p)^{1/p}
};

double ratio_vs_fstar(const MomentSummary& m);

// Probability-weighted tree carrying an adapted pair (f, g) under the
// declared subordination mode. Instances are validated on construction and
// immutable afterwards, so every tree reachable through this API satisfies:
//   - branch probabilities at each node sum to 1, each in (0, 1]
//   - martingale mode: sum_i prob_i df_i = 0 at every node
//   - submartingale mode: sum_i prob_i df_i >= 0 and f >= 0 on every path
//   - |dg| <= |df| branchwise
//   - alpha-strong flag: |sum_i prob_i dg_i| <= alpha sum_i prob_i df_i
class FiniteAdaptedTree {
public:
    static FiniteAdaptedTree create(TreeMode mode, bool alpha_strong, double alpha,
                                    double f0, double g0, std::vector<TreeNode> nodes,
                                    std::int32_t root);

    TreeMode mode() const { return mode_; }
    bool alpha_strong() const { return alpha_strong_; }
    double alpha() const { return alpha_; }
    double f0() const { return f0_; }
    double g0() const { return g0_; }
    std::int32_t root() const { return root_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    int depth() const { return depth_; }

    // number of leaf paths, saturated at cap
    long path_count(long cap) const;

    // same structure with the root state moved to (f0+eps, g0+eps)
    FiniteAdaptedTree shifted(double eps) const;

    std::string to_json() const;
    static FiniteAdaptedTree from_json(const std::string& text);

private:
    FiniteAdaptedTree() = default;
    TreeMode mode_ = TreeMode::Martingale;
    bool alpha_strong_ = false;
    double alpha_ = 0.0;
    double f0_ = 0.0;
    double g0_ = 0.0;
    std::int32_t root_ = -1;
    std::vector<TreeNode> nodes_;
    int depth_ = 0;
};

// exact expectations by weighted path enumeration; throws if the tree has
// more than path_limit paths
MomentSummary exact_moments(const FiniteAdaptedTree& tree, double p,
                            long path_limit = 10000000);

// skeleton of a martingale f (dg slots ignored) for transform construction
struct MartingaleSkeleton {
    double f0 = 0.0;
    std::vector<TreeNode> nodes;
    std::int32_t root = -1;
};

// g as the transform of f by a deterministic predictable multiplier sequence:
// g0 = signs[0] f0 and dg = signs[d+1] df on branches out of depth-d nodes.
// Requires |signs| <= 1 elementwise.
FiniteAdaptedTree build_transform_tree(const MartingaleSkeleton& f_tree,
                                       const std::vector<double>& signs);

// E[ U(f_{n+1}, g_{n+1}, g*_{n+1}) | node ] <= U(f_n, g_n, g*_n) at every
// internal node, and U(f0, g0, |g0|) <= 0 when f0 >= g0 > 0. Requires a
// submartingale-mode alpha-strong tree with f > 0 along all paths (apply
// shifted() first when needed).
CheckReport check_supermartingale_U(const FiniteAdaptedTree& tree,
                                    const GammaSolution& sol, double tol = 1e-10);

// random valid instances for property checks (deterministic in seed)
FiniteAdaptedTree random_transform_martingale(std::uint64_t seed, int max_depth,
                                              int max_branch);
FiniteAdaptedTree random_alpha_strong_submartingale(std::uint64_t seed, double alpha,
                                                    int max_depth, int max_branch);

}  // namespace maxineq
