#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "maxineq/rng.hpp"
#include "maxineq/tree_sim.hpp"

namespace maxineq {

// raw per-path statistics before the p-th powers are taken
struct PathSample {
    double gstar;       // sup_k |g_k|
    double f_term_abs;  // |f| at the terminal time
    double fstar;       // sup_k |f_k|
};

// draws one i.i.d. path; must depend only on the Rng stream passed in
using PathFn = std::function<PathSample(Rng&)>;

struct McResult {
    MomentSummary est;        // sample means and the ratio derived from them
    double se_gstar_p = 0.0;  // standard errors of the three means
    double se_f_p = 0.0;
    double se_fstar_p = 0.0;
    double se_ratio = 0.0;  // delta-method propagation, covariance ignored
    long n_paths = 0;
};

// Deterministic given (seed, n_paths) alone: path i draws from Rng(seed, i)
// and chunk partial sums are combined in fixed order, so the result is
// bit-identical for every thread count.
McResult mc_estimate(const PathFn& gen, double p, long n_paths, std::uint64_t seed,
                     int threads = 0);

// serial reference used by tests and the benchmark
McResult mc_estimate_serial(const PathFn& gen, double p, long n_paths,
                            std::uint64_t seed);

// samples a leaf path of the tree according to the branch probabilities
PathFn tree_path_sampler(const FiniteAdaptedTree& tree);

// symmetric +-sigma random walk of fixed depth, g the transform by
// deterministic signs (sign of level d is sign_fn(d))
PathFn walk_transform_sampler(int depth, double sigma,
                              std::function<double(int)> sign_fn);

// CSV rows (quantity, n_paths, estimate, stderr)
std::string mc_to_csv(const McResult& r);

}  // namespace maxineq
