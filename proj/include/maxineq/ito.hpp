#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "maxineq/mc.hpp"

namespace maxineq {

// one step of the Doob decomposition dX = dM + dA of a non-negative
// discrete submartingale; dA must be >= 0 and known before the step
struct ItoStep {
    double dM;
    double dA;
};

// deterministic (hence predictable) integrand value at step k = 1..n
using Integrand = std::function<double(long k)>;

class SubmartingalePathGen {
public:
    virtual ~SubmartingalePathGen() = default;
    virtual void reset() = 0;
    virtual ItoStep step(Rng& rng) = 0;
    virtual double x0() const { return 0.0; }
};

// X_k = |S_k| for a symmetric +-sigma lattice walk started at 0. The
// compensator is explicit: dA = sigma exactly when the walk sits at 0.
class ReflectedWalkGen final : public SubmartingalePathGen {
public:
    explicit ReflectedWalkGen(double sigma) : sigma_(sigma) {}
    void reset() override { pos_ = 0; }
    ItoStep step(Rng& rng) override;
    double x0() const override { return 0.0; }

private:
    double sigma_;
    long long pos_ = 0;
};

struct ItoPair {
    std::vector<double> X;  // X_0..X_n
    std::vector<double> Y;  // Y_0..Y_n, Y_0 = phi(0-slot) X_0 bounded by X_0
};

// Euler-style accumulation Y_k = Y_{k-1} + phi_k dM_k + psi_k dA_k over
// n = round(T/dt) steps. Enforces |phi| <= 1, |psi| <= alpha and dA >= 0.
ItoPair discretize_ito(SubmartingalePathGen& gen, const Integrand& phi,
                       const Integrand& psi, double dt, double T, double alpha,
                       Rng& rng);

// per-path sampler over the reflected walk for mc_estimate; the PathSample
// maps Y* -> gstar, X_n -> f_term_abs, X* -> fstar
PathFn reflected_ito_sampler(long steps, double dt, Integrand phi, Integrand psi,
                             double alpha);

Integrand alternating_integrand();           // +1, -1, +1, ...
Integrand constant_integrand(double value);  // value at every step

}  // namespace maxineq
