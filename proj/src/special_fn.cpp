#include "maxineq/special_fn.hpp"

#include <cmath>
#include <stdexcept>

namespace maxineq {

const char* region_name(Region r) {
    switch (r) {
        case Region::D0: return "D0";
        case Region::D1: return "D1";
        default: return "D2";
    }
}

Region classify(const GammaSolution& sol, double x, double y) {
    if (x < -1e-12) throw std::domain_error("classify: x must be non-negative");
    const double ay = std::abs(y);
    if (ay > 1.0 + 1e-12) throw std::domain_error("classify: |y| > 1 is outside the strip");
    double gx;
    if (x <= sol.x_max) {
        gx = gamma_eval(sol, x).value;
    } else if (ay <= sol.values.back()) {
        // gamma is non-decreasing, so |y| <= gamma(x_max) <= gamma(x)
        return Region::D0;
    } else {
        throw std::domain_error("classify: x beyond x_max with |y| above gamma(x_max)");
    }
    if (ay <= gx) return Region::D0;
    return (x + ay <= 1.0) ? Region::D1 : Region::D2;
}

double u_branch_value(const GammaSolution& sol, Region r, double x, double ay) {
    const Params& prm = sol.params;
    const double p = prm.p;
    switch (r) {
        case Region::D0:
            return 1.0 - std::pow(prm.cap1 * x, p);
        case Region::D1: {
            const double A = std::max((p * x + p * ay - 1.0) / (p - 1.0), 0.0);
            const double B = p * (p * (prm.alpha + 1.0) - 1.0) * x - p * ay + 1.0;
            return 1.0 - std::pow(A, p - 1.0) * B;
        }
        default: {
            const double s = x + ay;
            const double hs = h_eval(sol, s);
            return 1.0 - std::pow(prm.cap1 * hs, p - 1.0) * prm.cap1 *
                             (p * x - (p - 1.0) * hs);
        }
    }
}

Grad2 u_branch_grad(const GammaSolution& sol, Region r, double x, double ay) {
    const Params& prm = sol.params;
    const double p = prm.p;
    switch (r) {
        case Region::D0:
            return {-p * prm.cap1 * std::pow(prm.cap1 * x, p - 1.0), 0.0};
        case Region::D1: {
            const double A = std::max((p * x + p * ay - 1.0) / (p - 1.0), 0.0);
            const double B = p * (p * (prm.alpha + 1.0) - 1.0) * x - p * ay + 1.0;
            const double Apm2 = std::pow(A, p - 2.0);
            const double ux = -p * Apm2 * (B + A * (p * (prm.alpha + 1.0) - 1.0));
            const double uay = -p * Apm2 * (B - A);
            return {ux, uay};
        }
        default: {
            const double s = x + ay;
            const double hs = h_eval(sol, s);
            const double hp = h_prime(sol, s);
            const double whp2 = std::pow(prm.cap1 * hs, p - 2.0);
            const double c2 = prm.cap1 * prm.cap1;
            const double ux = -c2 * p * whp2 * ((p - 1.0) * hp * (x - hs) + hs);
            const double uay = -c2 * p * (p - 1.0) * hp * whp2 * (x - hs);
            return {ux, uay};
        }
    }
}

double u_eval(const GammaSolution& sol, double x, double y) {
    return u_branch_value(sol, classify(sol, x, y), x, std::abs(y));
}

Grad2 u_grad(const GammaSolution& sol, double x, double y) {
    const double ay = std::abs(y);
    const Grad2 g = u_branch_grad(sol, classify(sol, x, y), x, ay);
    const double sgn = (y > 0.0) ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
    return {g.dx, sgn * g.dy};
}

double U_eval(const GammaSolution& sol, const Point3& pt) {
    if (!(pt.z > 0.0)) throw std::domain_error("U_eval: z must be positive");
    if (pt.x < -1e-12) throw std::domain_error("U_eval: x must be non-negative");
    const double m = std::max(std::abs(pt.y), pt.z);
    const double scale = std::pow(m, sol.params.p);
    return scale * u_eval(sol, std::max(pt.x, 0.0) / m, pt.y / m);
}

Grad2 U_grad(const GammaSolution& sol, const Point3& pt) {
    if (!(pt.z > 0.0)) throw std::domain_error("U_grad: z must be positive");
    if (pt.x < -1e-12) throw std::domain_error("U_grad: x must be non-negative");
    const double p = sol.params.p;
    const double ay = std::abs(pt.y);
    const double x = std::max(pt.x, 0.0);
    if (ay <= pt.z) {
        // m = z locally constant
        const double m = pt.z;
        const double mp1 = std::pow(m, p - 1.0);
        const Grad2 g = u_grad(sol, x / m, pt.y / m);
        return {mp1 * g.dx, mp1 * g.dy};
    }
    // m = |y|: U(x,y,z) = |y|^p u(x/|y|, 1)
    const double m = ay;
    const double mp1 = std::pow(m, p - 1.0);
    const double X = x / m;
    const double uval = u_eval(sol, X, 1.0);
    const Grad2 g = u_branch_grad(sol, classify(sol, X, 1.0), X, 1.0);
    const double sgn = (pt.y > 0.0) ? 1.0 : -1.0;
    return {mp1 * g.dx, sgn * mp1 * (p * uval - X * g.dx)};
}

}  // namespace maxineq
