#include "maxineq/ito.hpp"

#include <cmath>
#include <stdexcept>

namespace maxineq {

ItoStep ReflectedWalkGen::step(Rng& rng) {
    if (pos_ == 0) {
        // deterministic step away from the origin: dX = sigma = dA, dM = 0
        pos_ = rng.coin_sign();
        return {0.0, sigma_};
    }
    const long long prev = std::llabs(pos_);
    pos_ += rng.coin_sign();
    const double dX = sigma_ * static_cast<double>(std::llabs(pos_) - prev);
    return {dX, 0.0};
}

namespace {

long step_count(double dt, double T) {
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("ito: dt, T must be positive");
    const long n = static_cast<long>(std::floor(T / dt + 0.5));
    if (n < 1) throw std::invalid_argument("ito: fewer than one step");
    return n;
}

}  // namespace

ItoPair discretize_ito(SubmartingalePathGen& gen, const Integrand& phi,
                       const Integrand& psi, double dt, double T, double alpha,
                       Rng& rng) {
    const long n = step_count(dt, T);
    gen.reset();
    ItoPair out;
    out.X.reserve(static_cast<std::size_t>(n) + 1);
    out.Y.reserve(static_cast<std::size_t>(n) + 1);
    double X = gen.x0();
    double Y = 0.0;
    if (X > 0.0) {
        const double h0 = phi(0);
        if (std::abs(h0) > 1.0) throw std::invalid_argument("ito: |phi| > 1");
        Y = h0 * X;  // |Y_0| <= X_0
    }
    out.X.push_back(X);
    out.Y.push_back(Y);
    for (long k = 1; k <= n; ++k) {
        const ItoStep st = gen.step(rng);
        if (st.dA < 0.0)
            throw std::invalid_argument("ito: negative compensator increment rejected");
        const double hk = phi(k), pk = psi(k);
        if (std::abs(hk) > 1.0) throw std::invalid_argument("ito: |phi| > 1");
        if (std::abs(pk) > alpha + 1e-15)
            throw std::invalid_argument("ito: |psi| > alpha");
        X += st.dM + st.dA;
        Y += hk * st.dM + pk * st.dA;
        out.X.push_back(X);
        out.Y.push_back(Y);
    }
    return out;
}

PathFn reflected_ito_sampler(long steps, double dt, Integrand phi, Integrand psi,
                             double alpha) {
    if (steps < 1) throw std::invalid_argument("ito: steps >= 1 required");
    const double sigma = std::sqrt(dt);
    // validate the deterministic integrands once up front
    for (long k = 0; k <= std::min<long>(steps, 4096); ++k) {
        if (std::abs(phi(k)) > 1.0) throw std::invalid_argument("ito: |phi| > 1");
        if (k >= 1 && std::abs(psi(k)) > alpha + 1e-15)
            throw std::invalid_argument("ito: |psi| > alpha");
    }
    return [steps, sigma, phi, psi](Rng& rng) {
        long long pos = 0;
        double X = 0.0, Y = 0.0;
        double xstar = 0.0, ystar = 0.0;
        for (long k = 1; k <= steps; ++k) {
            double dM, dA;
            if (pos == 0) {
                pos = rng.coin_sign();
                dM = 0.0;
                dA = sigma;
            } else {
                const long long prev = std::llabs(pos);
                pos += rng.coin_sign();
                dM = sigma * static_cast<double>(std::llabs(pos) - prev);
                dA = 0.0;
            }
            X += dM + dA;
            Y += phi(k) * dM + psi(k) * dA;
            xstar = std::max(xstar, X);
            ystar = std::max(ystar, std::abs(Y));
        }
        return PathSample{ystar, X, xstar};
    };
}

Integrand alternating_integrand() {
    return [](long k) { return (k % 2 == 0) ? 1.0 : -1.0; };
}

Integrand constant_integrand(double value) {
    return [value](long) { return value; };
}

}  // namespace maxineq
