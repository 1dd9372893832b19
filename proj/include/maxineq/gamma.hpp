#pragma once

#include <string>
#include <vector>

namespace maxineq {

// Exponent/subordination parameters and the constants derived from them.
// C = ((alpha+1)p)^p (p-1) and x0 = 1/((alpha+1)p) drive everything else;
// cap1 = (alpha+1)p is kept separately so large-p powers can be formed as
// pow(cap1*x, p) instead of the overflow-prone C * x^p.
struct Params {
    double p = 2.0;
    double alpha = 1.0;
    double cap1 = 4.0;  // (alpha+1)*p
    double C = 16.0;    // cap1^p * (p-1)
    double x0 = 0.25;   // 1/cap1
};

Params make_params(double p, double alpha);

// slope of the linear extension on [0, x0]: (p-1)(alpha+1) - 1
double gamma_linear_slope(const Params& prm);

// linear extension value on [0, x0]
double gamma_linear(double x, const Params& prm);

// right-hand side of the boundary-curve ODE
//   gamma' = (-1 + C(1-gamma) gamma x^{p-2}) / (1 + C(1-gamma) x^{p-1})
double gamma_ode_rhs(double x, double g, const Params& prm);

// second derivative along solutions, d/dx of the right-hand side
double gamma_ode_rhs2(double x, double g, double gp, const Params& prm);

// partial derivative of the right-hand side in gamma (noise amplification)
double gamma_ode_rhs_dg(double x, double g, double gp, const Params& prm);

struct SolverOptions {
    double rtol = 1e-13;
    double atol = 1e-15;
    double max_step = 2e-3;           // cap on knot spacing; keeps the Hermite
    double max_step_junction = 2.5e-4;  // interpolant within the residual budget
    double junction_window = 0.25;      // tighter cap on [x0, x0 + window]
};

// Numerical solution of the curve: linear on [0, x0], ODE solution knots on
// [x0, x_max] with stored derivatives, cubic Hermite in between. Immutable
// after construction; all queries are const and thread-safe.
struct GammaSolution {
    Params params;
    std::vector<double> knots;    // strictly increasing, knots[0] == x0
    std::vector<double> values;   // gamma at knots, values[0] == 1 - x0
    std::vector<double> derivs;   // ODE right-hand side at knots
    std::vector<double> derivs2;  // second derivatives at knots (quintic interpolation)
    double x_max = 0.0;  // may be smaller than requested if 1-gamma hit
                         // double resolution and the tail was truncated
    double resid_tol = 1e-9;
    double rtol = 1e-13;
    double atol = 1e-15;
};

struct GammaEval {
    double value;
    double deriv;
};

GammaSolution solve_gamma(const Params& prm, double x_max, double resid_tol,
                          const SolverOptions& opt = {});

// C^1 piecewise evaluation on [0, x_max]; throws on extrapolation.
GammaEval gamma_eval(const GammaSolution& sol, double x);

// H(x) = x + gamma(x), defined for x in [x0, x_max]
double H_eval(const GammaSolution& sol, double x);

// largest s for which h(s) is available
double h_domain_max(const GammaSolution& sol);

// inverse of H: unique root of x + gamma(x) = s, s in [1, H(x_max)]
double h_eval(const GammaSolution& sol, double s);

// h'(s) = 1 / (1 + gamma'(h(s)))
double h_prime(const GammaSolution& sol, double s);

// same derivative through the algebraic product form, which uses gamma only
// via s - h(s); kept as an independent cross-check of h_prime
double h_prime_prod(const GammaSolution& sol, double s);

// scale-normalized ODE residual of the interpolant at x:
//   |gamma_hat'(x) (1 + C(1-gamma_hat)x^{p-1}) - (-1 + C(1-gamma_hat) gamma_hat x^{p-2})|
// divided by max(1, |denominator|), so it measures the derivative mismatch
// even where the raw terms are astronomically large.
double ode_residual(const GammaSolution& sol, double x);

// versioned JSON document (round-trips through gamma_from_json)
std::string gamma_to_json(const GammaSolution& sol);
GammaSolution gamma_from_json(const std::string& text);

// (x, gamma, gamma') rows from 0 to x_hi inclusive with the given step
std::string gamma_to_csv(const GammaSolution& sol, double x_hi, double step);

}  // namespace maxineq
