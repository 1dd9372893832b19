#pragma once

#include <cstdint>
#include <vector>

#include "maxineq/check_report.hpp"
#include "maxineq/special_fn.hpp"

namespace maxineq {

// Strip grid on the normalized chart |y| v z = 1 (z = 1, |y| <= 1). Mixes
// uniform and logarithmic x coverage and adds points a fixed offset inside
// each region along the seams |y| = gamma(x) and x + |y| = 1.
struct GridSpec {
    long nx = 260;
    long ny = 380;
    double x_hi = 8.0;
    double boundary_offset = 1e-4;
};

struct StripPoint {
    double x;
    double y;
};

std::vector<StripPoint> make_strip_grid(const GammaSolution& sol, const GridSpec& spec);

// min over the grid of U - ((|y| v z)^p - ((alpha+1)p)^p x^p); pass >= -1e-9
CheckReport check_majorization(const GammaSolution& sol, const GridSpec& spec,
                               int threads = 0, double tol = 1e-9);

// max over the grid of (U_x + alpha |U_y|) / scale; pass <= 1e-9
CheckReport check_derivative_inequality(const GammaSolution& sol, const GridSpec& spec,
                                        int threads = 0, double tol = 1e-9);

// max over random lines t -> U(t, y + a t, 1) of the centered second
// difference / (delta^2 scale); pass <= 1e-7
CheckReport check_line_concavity(const GammaSolution& sol, long samples, long t_points,
                                 std::uint64_t seed, int threads = 0,
                                 double tol = 1e-7);

// max normalized violation of
//   U(x+kx, y+ky, z) <= U + U_x kx + U_y ky  for |ky| <= |kx|; pass <= 1e-9
CheckReport check_chord_domination(const GammaSolution& sol, long samples,
                                   std::uint64_t seed, int threads = 0,
                                   double tol = 1e-9);

// max of U(x,1,1) over the given x-values (all >= 1); pass <= 1e-9
CheckReport check_start_condition(const GammaSolution& sol, const std::vector<double>& xs,
                                  int threads = 0, double tol = 1e-9);

// bundle of boundary-curve properties: junction slope, range, monotonicity,
// concavity, ODE residual at random points, the derivative inequality
// (p-2)(1-gamma) <= x gamma', inverse-function identities, h bounds.
// worst_slack is max over items of (violation - item tolerance); pass <= 0.
CheckReport check_gamma_properties(const GammaSolution& sol, long n_random,
                                   std::uint64_t seed);

// one-sided branch values/gradients on both sides of each seam; pass <= 1e-7
CheckReport check_c1_seams(const GammaSolution& sol, long samples);

// analytic gradient vs central finite differences away from kinks and seams;
// pass (max relative error) <= 1e-6
CheckReport check_gradient_fd(const GammaSolution& sol, long samples,
                              std::uint64_t seed, int threads = 0);

// smallest K over a compact 3-d grid with U <= K (x+|y|+z)^p and
// |U_x|, |U_y| <= K (x+|y|+z)^{p-1}
double empirical_bound_constant(const GammaSolution& sol, long n_per_axis,
                                int threads = 0);

struct VerifierOptions {
    double x_max = 64.0;
    GridSpec grid;
    long concavity_samples = 10000;
    long t_points = 121;
    long chord_samples = 10000;
    long fd_samples = 10000;
    long start_points = 1000;
    long gamma_random_points = 1000;
    std::uint64_t seed = 12345;
    int threads = 0;
    double check_tol = 1e-9;  // propagated into the grid checks verbatim
    bool corrupt_gamma = false;  // test hook: breaks the curve on purpose
};

// solve the curve for (p, alpha) and run every check
std::vector<CheckReport> run_full_suite(double p, double alpha, const VerifierOptions& opt);

}  // namespace maxineq
