#pragma once

#include <string>
#include <vector>

#include "maxineq/tree_sim.hpp"

namespace maxineq {

enum class SharpnessMode { Martingale, Submartingale };

struct SharpnessRow {
    double delta = 0.0;
    long rounds = 0;
    double e_gstar_p = 0.0;
    double e_fstar_p = 0.0;
    double ratio = 0.0;         // (e_gstar_p / e_fstar_p)^{1/p}
    double ratio_strong = 0.0;  // against E|f_terminal|^p, informational
};

// Witness martingale with g a +-1 transform of f. Rooted at (f0, g0) = (1, 1)
// with one zero-drift entry split onto (0, 2) + absorbed (2, 0); from there
// each round runs the two alternating-slope splits whose zero-drift weights
// are 1/(1+p d) : p d/(1+p d) and (1+d-pd)/(1+d) : pd/(1+d), absorbing one
// branch per split and rescaling the survivor by (1+2d). Truncation absorbs
// the remaining mass in place. The ratio approaches p from below as d -> 0
// with enough rounds.
FiniteAdaptedTree build_extremal_martingale(double p, double delta, long rounds);

// Submartingale/alpha-strong variant: each round is a deterministic drift
// move (d, alpha d) followed by a zero-drift split with weights
// (1+ad-d(a+1)p)/(1+ad) : d(a+1)p/(1+ad); survivor rescales by (1+(a+1)d).
// The ratio approaches (alpha+1)p from below.
FiniteAdaptedTree build_extremal_submartingale(double p, double alpha, double delta,
                                               long rounds);

struct RateValues {
    double F;
    double G;
};

// per-round leakage factors of the two recursions:
//   F(s) = 1 - (1+s-ps)(1+2s)^p / ((1+s)(1+ps))
//   G(s) = 1 - (1+as-s(a+1)p)/(1+as) * (1+(a+1)s)^p
// both vanish to second order at s = 0
RateValues rate_functions(double s, double p, double alpha);

// rounds heuristic that lets the survivor mass decay: the per-round retained
// fraction is 1-F(d) ~ 1-pd^2 (martingale) resp. 1-G(d) (submartingale)
long default_rounds(SharpnessMode mode, double delta);

// builds the witness for each (delta, rounds) pair and measures it exactly;
// rounds may be empty, in which case default_rounds is used per delta
std::vector<SharpnessRow> ratio_sweep(SharpnessMode mode, double p, double alpha,
                                      const std::vector<double>& deltas,
                                      const std::vector<long>& rounds);

double sharpness_bound(SharpnessMode mode, double p, double alpha);

std::string sweep_to_csv(SharpnessMode mode, double p, double alpha,
                         const std::vector<SharpnessRow>& rows);
std::string sweep_summary_json(SharpnessMode mode, double p, double alpha,
                               const std::vector<SharpnessRow>& rows);

}  // namespace maxineq
