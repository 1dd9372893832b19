// Times the OpenMP kernels against their serial references: the grid scan
// behind the certification checks and the chunked Monte Carlo estimator.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "maxineq/grid.hpp"
#include "maxineq/ito.hpp"
#include "maxineq/mc.hpp"
#include "maxineq/verifier.hpp"

using namespace maxineq;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <class F>
double time_it(F&& fn) {
    const double t0 = now_s();
    fn();
    return now_s() - t0;
}

}  // namespace

int main(int argc, char** argv) {
    long grid_n = 400000;
    long mc_paths = 200000;
    if (argc > 1) grid_n = std::atol(argv[1]);
    if (argc > 2) mc_paths = std::atol(argv[2]);

    const Params prm = make_params(2.0, 1.0);
    const GammaSolution sol = solve_gamma(prm, 64.0, 1e-9);

    GridSpec spec;
    spec.ny = 380;
    spec.nx = std::max<long>(4, grid_n / (spec.ny + 14));
    const std::vector<StripPoint> pts = make_strip_grid(sol, spec);
    const long n = static_cast<long>(pts.size());
    auto slack = [&](long i) {
        const StripPoint& q = pts[static_cast<std::size_t>(i)];
        const double uv = u_eval(sol, q.x, q.y);
        const double maj = 1.0 - std::pow(prm.cap1 * q.x, prm.p);
        return (uv - maj) / std::max({1.0, std::abs(uv), std::abs(maj)});
    };

    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-28s %12s %12s %10s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    ScanResult rs{}, rp{};
    const double ts = time_it([&] { rs = scan_min_serial(n, slack); });
    const double tp = time_it([&] { rp = scan_min(n, slack, 0); });
    std::printf("%-28s %12.4f %12.4f %9.2fx   (identical: %s)\n", "majorization grid scan",
                ts, tp, ts / tp,
                (rs.value == rp.value && rs.index == rp.index) ? "yes" : "NO");

    const PathFn gen = reflected_ito_sampler(512, 1.0 / 512.0, alternating_integrand(),
                                             alternating_integrand(), 1.0);
    McResult ms{}, mp{};
    const double us = time_it([&] { ms = mc_estimate_serial(gen, 2.0, mc_paths, 7); });
    const double up = time_it([&] { mp = mc_estimate(gen, 2.0, mc_paths, 7, 0); });
    std::printf("%-28s %12.4f %12.4f %9.2fx   (identical: %s)\n", "monte carlo (ito paths)",
                us, up, us / up,
                (ms.est.e_gstar_p == mp.est.e_gstar_p && ms.est.e_f_p == mp.est.e_f_p)
                    ? "yes"
                    : "NO");
    return 0;
}
