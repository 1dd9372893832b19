#pragma once

#include "maxineq/gamma.hpp"

namespace maxineq {

// Regions of the strip S = [0,inf) x [-1,1]:
//   D0: |y| <= gamma(x)
//   D1: |y| >  gamma(x), x + |y| <= 1
//   D2: |y| >  gamma(x), x + |y| >  1
enum class Region { D0, D1, D2 };

const char* region_name(Region r);

// point in the domain of U; requires x >= 0, z > 0
struct Point3 {
    double x;
    double y;
    double z;
};

struct Grad2 {
    double dx;  // partial in x
    double dy;  // partial in y (signed)
};

// Boundary points go to the weakly-defined side: |y| = gamma(x) -> D0,
// x + |y| = 1 (with |y| > gamma) -> D1. Throws if |y| > 1 or x < 0, or if x
// exceeds the solved range and the region is not decidable from gamma(x_max).
Region classify(const GammaSolution& sol, double x, double y);

// u on the strip, piecewise over D0/D1/D2; even in y
double u_eval(const GammaSolution& sol, double x, double y);

// value of a specific branch formula at (x, |y|); used for seam checks
double u_branch_value(const GammaSolution& sol, Region r, double x, double ay);

// (d/dx, d/d|y|) of a specific branch at (x, |y| = ay)
Grad2 u_branch_grad(const GammaSolution& sol, Region r, double x, double ay);

// gradient of u at (x, y): dx plus the signed y-derivative
Grad2 u_grad(const GammaSolution& sol, double x, double y);

// homogeneous degree-p extension U(x,y,z) = (|y| v z)^p u(x/m, y/m)
double U_eval(const GammaSolution& sol, const Point3& pt);

// analytic partial derivatives U_x, U_y. On the measure-zero kinks |y| = z
// and y = 0 the one-sided derivative from the |y| <= z / y >= 0 chart is
// returned; at x = 0 the dx slot holds the right-sided derivative.
Grad2 U_grad(const GammaSolution& sol, const Point3& pt);

}  // namespace maxineq
