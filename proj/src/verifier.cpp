#include "maxineq/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "maxineq/grid.hpp"
#include "maxineq/rng.hpp"

namespace maxineq {

namespace {

std::string fmt_loc(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), fmt, a, b, c);
    return buf;
}

}  // namespace

std::vector<StripPoint> make_strip_grid(const GammaSolution& sol, const GridSpec& spec) {
    const double X = spec.x_hi;
    const double off = spec.boundary_offset;
    const double x0 = sol.params.x0;

    std::vector<double> xs;
    const long n_uni = std::max<long>(2, (spec.nx * 3) / 4);
    const long n_log = std::max<long>(2, spec.nx - n_uni);
    for (long i = 0; i < n_uni; ++i)
        xs.push_back(X * static_cast<double>(i) / static_cast<double>(n_uni - 1));
    for (long i = 0; i < n_log; ++i)
        xs.push_back(X * std::pow(10.0, -6.0 + 6.0 * static_cast<double>(i) /
                                             static_cast<double>(n_log - 1)));
    for (double d : {0.0, off, -off, 1e-6, -1e-6})
        if (x0 + d > 0.0 && x0 + d < X) xs.push_back(x0 + d);

    std::vector<StripPoint> pts;
    pts.reserve(static_cast<std::size_t>(xs.size() * (spec.ny + 14)));
    for (double x : xs) {
        const double gx = gamma_eval(sol, x).value;
        auto push = [&](double y) {
            if (std::abs(y) <= 1.0) pts.push_back({x, y});
        };
        const long ny = std::max<long>(2, spec.ny);
        for (long j = 0; j < ny; ++j)
            push(-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(ny - 1));
        push(0.0);
        for (double s : {1.0, -1.0}) {
            push(s * gx);
            push(s * std::min(gx + off, 1.0));
            push(s * std::max(gx - off, 0.0));
            const double ycut = 1.0 - x;
            if (ycut >= 0.0) {
                push(s * ycut);
                push(s * (ycut + off));
                push(s * std::max(ycut - off, 0.0));
            }
        }
    }
    return pts;
}

CheckReport check_majorization(const GammaSolution& sol, const GridSpec& spec,
                               int threads, double tol) {
    const std::vector<StripPoint> pts = make_strip_grid(sol, spec);
    const Params& prm = sol.params;
    const long n = static_cast<long>(pts.size());
    auto slack = [&](long i) {
        const StripPoint& q = pts[static_cast<std::size_t>(i)];
        const double uv = u_eval(sol, q.x, q.y);
        const double maj = 1.0 - std::pow(prm.cap1 * q.x, prm.p);
        return (uv - maj) / std::max({1.0, std::abs(uv), std::abs(maj)});
    };
    const ScanResult r = scan_min(n, slack, threads);
    const StripPoint& w = pts[static_cast<std::size_t>(std::max(r.index, 0L))];
    return CheckReport::make("majorization", prm, n, r.value,
                             fmt_loc("x=%.9g,y=%.9g,z=1", w.x, w.y), tol, SlackKind::GE);
}

CheckReport check_derivative_inequality(const GammaSolution& sol, const GridSpec& spec,
                                        int threads, double tol) {
    const std::vector<StripPoint> pts = make_strip_grid(sol, spec);
    const Params& prm = sol.params;
    const long n = static_cast<long>(pts.size());
    auto slack = [&](long i) {
        const StripPoint& q = pts[static_cast<std::size_t>(i)];
        const Grad2 g = U_grad(sol, {q.x, q.y, 1.0});
        const double v = g.dx + prm.alpha * std::abs(g.dy);
        return v / std::max(1.0, std::abs(g.dx) + prm.alpha * std::abs(g.dy));
    };
    const ScanResult r = scan_max(n, slack, threads);
    const StripPoint& w = pts[static_cast<std::size_t>(std::max(r.index, 0L))];
    return CheckReport::make("derivative_inequality", prm, n, r.value,
                             fmt_loc("x=%.9g,y=%.9g,z=1", w.x, w.y), tol, SlackKind::LE);
}

CheckReport check_line_concavity(const GammaSolution& sol, long samples, long t_points,
                                 std::uint64_t seed, int threads, double tol) {
    if (samples < 2 || t_points < 3)
        throw std::invalid_argument("check_line_concavity: need samples, t_points >= 2");
    const Params& prm = sol.params;
    const double t_hi = 6.0;
    const double dt = t_hi / static_cast<double>(t_points - 1);
    auto line_max = [&](long i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const double y = rng.uniform(-1.0, 1.0);
        const double a = rng.uniform(-1.0, 1.0);
        double worst = -1e300;
        double fm = U_eval(sol, {0.0, y, 1.0});
        double f0 = U_eval(sol, {dt, y + a * dt, 1.0});
        for (long k = 1; k + 1 < t_points; ++k) {
            const double tp = static_cast<double>(k + 1) * dt;
            const double fp = U_eval(sol, {tp, y + a * tp, 1.0});
            const double scale =
                std::max({1.0, std::abs(fm), std::abs(f0), std::abs(fp)});
            const double second = (fm - 2.0 * f0 + fp) / (dt * dt * scale);
            worst = std::max(worst, second);
            fm = f0;
            f0 = fp;
        }
        return worst;
    };
    const ScanResult r = scan_max(samples, line_max, threads);
    return CheckReport::make("line_concavity", prm, samples * (t_points - 2), r.value,
                             fmt_loc("line_index=%.9g", static_cast<double>(r.index)),
                             tol, SlackKind::LE);
}

CheckReport check_chord_domination(const GammaSolution& sol, long samples,
                                   std::uint64_t seed, int threads, double tol) {
    const Params& prm = sol.params;
    auto slack = [&](long i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const double x = (i % 16 == 0) ? 0.0 : rng.uniform(0.0, 6.0);
        const double y = rng.uniform(-1.0, 1.0);
        const double kx = -0.99 * x + rng.next_double() * (3.0 + 0.99 * x);
        const double ky = rng.uniform(-1.0, 1.0) * std::abs(kx);
        const double u0 = U_eval(sol, {x, y, 1.0});
        const Grad2 g = U_grad(sol, {x, y, 1.0});
        const double u1 = U_eval(sol, {x + kx, y + ky, 1.0});
        const double lin = u0 + g.dx * kx + g.dy * ky;
        const double scale = std::max({1.0, std::abs(u0), std::abs(u1),
                                       std::abs(g.dx * kx), std::abs(g.dy * ky)});
        return (u1 - lin) / scale;
    };
    const ScanResult r = scan_max(samples, slack, threads);
    return CheckReport::make("chord_domination", prm, samples, r.value,
                             fmt_loc("sample_index=%.9g", static_cast<double>(r.index)),
                             tol, SlackKind::LE);
}

CheckReport check_start_condition(const GammaSolution& sol, const std::vector<double>& xs,
                                  int threads, double tol) {
    const Params& prm = sol.params;
    for (double x : xs)
        if (x < 1.0) throw std::invalid_argument("check_start_condition: x must be >= 1");
    auto slack = [&](long i) {
        const double x = xs[static_cast<std::size_t>(i)];
        const double v = U_eval(sol, {x, 1.0, 1.0});
        return v / std::max(1.0, std::abs(v));
    };
    const ScanResult r = scan_max(static_cast<long>(xs.size()), slack, threads);
    const double wx = xs.empty() ? 0.0 : xs[static_cast<std::size_t>(std::max(r.index, 0L))];
    return CheckReport::make("start_condition", prm, static_cast<long>(xs.size()), r.value,
                             fmt_loc("x=%.9g,y=1,z=1", wx), tol, SlackKind::LE);
}

CheckReport check_gamma_properties(const GammaSolution& sol, long n_random,
                                   std::uint64_t seed) {
    const Params& prm = sol.params;
    struct Item {
        const char* name;
        double violation;
        double tol;
    };
    std::vector<Item> items;
    const double x_hi = std::min(sol.x_max, 32.0);

    // junction: stored right derivative vs the linear slope, plus two-sided C1
    const double slope = gamma_linear_slope(prm);
    items.push_back({"junction_slope", std::abs(sol.derivs[0] - slope), 1e-8});
    {
        const double xl = prm.x0 * (1.0 - 1e-12);
        const double xr = prm.x0 * (1.0 + 1e-12);
        const GammaEval l = gamma_eval(sol, xl);
        const GammaEval r = gamma_eval(sol, xr);
        items.push_back({"junction_c1",
                         std::max(std::abs(l.value - r.value), std::abs(l.deriv - r.deriv)),
                         1e-10});
    }
    {
        double maxv = 0.0, minv = 1.0, mind = 0.0, max_slope_rise = -1e300;
        double prev_slope = 1e300;
        for (std::size_t i = 0; i < sol.knots.size(); ++i) {
            maxv = std::max(maxv, sol.values[i]);
            minv = std::min(minv, sol.values[i]);
            mind = std::min(mind, sol.derivs[i]);
            if (i > 0) {
                const double sl = (sol.values[i] - sol.values[i - 1]) /
                                  (sol.knots[i] - sol.knots[i - 1]);
                if (prev_slope < 1e300) max_slope_rise = std::max(max_slope_rise, sl - prev_slope);
                prev_slope = sl;
            }
        }
        items.push_back({"range_below_one", maxv - (1.0 - 1e-13), 0.0});
        items.push_back({"range_above_zero", -minv, 0.0});
        items.push_back({"monotone", -mind, sol.resid_tol});
        items.push_back({"concave_knots", max_slope_rise, sol.resid_tol});
    }
    {
        double max_resid = 0.0, max_wazne = -1e300;
        double resid_x = 0.0;
        for (long i = 0; i < n_random; ++i) {
            Rng rng(seed, static_cast<std::uint64_t>(i));
            const double x = prm.x0 + (x_hi - prm.x0) * rng.next_double();
            const double res = ode_residual(sol, x);
            if (res > max_resid) {
                max_resid = res;
                resid_x = x;
            }
            const GammaEval ge = gamma_eval(sol, x);
            max_wazne = std::max(max_wazne,
                                 (prm.p - 2.0) * (1.0 - ge.value) - x * ge.deriv);
        }
        (void)resid_x;
        items.push_back({"ode_residual", max_resid, sol.resid_tol});
        items.push_back({"deriv_vs_gap", max_wazne, 1e-9});
    }
    {
        // inverse-function identities and h facts
        const double sh = H_eval(sol, x_hi);
        double idhH = 0.0, idHh = 0.0, bviol = -1e300, hp_rel = 0.0, hp_range = -1e300;
        for (long i = 0; i < n_random; ++i) {
            Rng rng(seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(i));
            const double x = prm.x0 + (x_hi - prm.x0) * rng.next_double();
            idhH = std::max(idhH, std::abs(h_eval(sol, H_eval(sol, x)) - x));
            const double s = 1.0 + (sh - 1.0) * rng.next_double();
            idHh = std::max(idHh, std::abs(H_eval(sol, h_eval(sol, s)) - s));
            const double hs = h_eval(sol, s);
            bviol = std::max({bviol, hs - s, (s - 1.0) - hs});
            if (s > 1.0 + 1e-8) {
                const double a = h_prime(sol, s);
                const double b = h_prime_prod(sol, s);
                hp_rel = std::max(hp_rel, std::abs(a - b) / std::max(std::abs(a), 1e-300));
                hp_range = std::max({hp_range, a - 1.0, -a});
            }
        }
        items.push_back({"inverse_h_of_H", idhH, 1e-9});
        items.push_back({"inverse_H_of_h", idHh, 1e-9});
        items.push_back({"h_at_one", std::abs(h_eval(sol, 1.0) - prm.x0), 1e-10});
        items.push_back({"h_bounds", bviol, 1e-12});
        items.push_back({"h_prime_two_forms", hp_rel, 1e-7});
        items.push_back({"h_prime_in_unit", hp_range, 1e-12});
        // s -> h(s+1) - s must be non-increasing
        double rise = -1e300, prev = 1e300;
        const long m = 200;
        for (long i = 0; i <= m; ++i) {
            const double s = 1.0 + (sh - 2.0) * static_cast<double>(i) / m;
            const double v = h_eval(sol, s + 1.0) - s;
            if (prev < 1e300) rise = std::max(rise, v - prev);
            prev = v;
        }
        items.push_back({"h_shift_non_increasing", rise, 1e-10});
    }

    double worst = -1e300;
    const char* worst_name = "none";
    for (const Item& it : items) {
        const double margin = it.violation - it.tol;
        if (margin > worst) {
            worst = margin;
            worst_name = it.name;
        }
    }
    return CheckReport::make("gamma_properties", prm,
                             static_cast<long>(items.size()), worst, worst_name, 0.0,
                             SlackKind::LE);
}

CheckReport check_c1_seams(const GammaSolution& sol, long samples) {
    const Params& prm = sol.params;
    double worst = -1e300;
    std::string wloc = "none";
    auto consider = [&](double v, double x, double ay, const char* seam) {
        if (v > worst) {
            worst = v;
            wloc = fmt_loc("x=%.9g,|y|=%.9g,", x, ay) + seam;
        }
    };
    const long n1 = samples / 3, n2 = samples / 3, n3 = samples - n1 - n2;
    // curve seam inside the triangle (D0/D1) and beyond it (D0/D2)
    for (long i = 0; i < n1; ++i) {
        const double x = prm.x0 * (static_cast<double>(i) + 0.5) / n1;
        const double ay = gamma_eval(sol, x).value;
        const double va = u_branch_value(sol, Region::D0, x, ay);
        const double vb = u_branch_value(sol, Region::D1, x, ay);
        const Grad2 ga = u_branch_grad(sol, Region::D0, x, ay);
        const Grad2 gb = u_branch_grad(sol, Region::D1, x, ay);
        const double sv = std::max(1.0, std::abs(va));
        const double sg = std::max({1.0, std::abs(ga.dx), std::abs(ga.dy)});
        consider(std::abs(va - vb) / sv, x, ay, "D0|D1");
        consider(std::abs(ga.dx - gb.dx) / sg, x, ay, "D0|D1 dx");
        consider(std::abs(ga.dy - gb.dy) / sg, x, ay, "D0|D1 dy");
    }
    const double seam_hi = std::min(sol.x_max, 24.0);
    for (long i = 0; i < n2; ++i) {
        const double x =
            prm.x0 + (seam_hi - prm.x0) * (static_cast<double>(i) + 0.5) / n2;
        const double ay = gamma_eval(sol, x).value;
        const double va = u_branch_value(sol, Region::D0, x, ay);
        const double vb = u_branch_value(sol, Region::D2, x, ay);
        const Grad2 ga = u_branch_grad(sol, Region::D0, x, ay);
        const Grad2 gb = u_branch_grad(sol, Region::D2, x, ay);
        const double sv = std::max(1.0, std::abs(va));
        const double sg = std::max({1.0, std::abs(ga.dx), std::abs(ga.dy)});
        consider(std::abs(va - vb) / sv, x, ay, "D0|D2");
        consider(std::abs(ga.dx - gb.dx) / sg, x, ay, "D0|D2 dx");
        consider(std::abs(ga.dy - gb.dy) / sg, x, ay, "D0|D2 dy");
    }
    // diagonal seam x + |y| = 1 between D1 and D2
    for (long i = 0; i < n3; ++i) {
        const double x = prm.x0 * (static_cast<double>(i) + 0.5) / n3;
        const double ay = 1.0 - x;
        const double va = u_branch_value(sol, Region::D1, x, ay);
        const double vb = u_branch_value(sol, Region::D2, x, ay);
        const Grad2 ga = u_branch_grad(sol, Region::D1, x, ay);
        const Grad2 gb = u_branch_grad(sol, Region::D2, x, ay);
        const double sv = std::max(1.0, std::abs(va));
        const double sg = std::max({1.0, std::abs(ga.dx), std::abs(ga.dy)});
        consider(std::abs(va - vb) / sv, x, ay, "D1|D2");
        consider(std::abs(ga.dx - gb.dx) / sg, x, ay, "D1|D2 dx");
        consider(std::abs(ga.dy - gb.dy) / sg, x, ay, "D1|D2 dy");
    }
    return CheckReport::make("c1_seams", prm, samples * 3, worst, wloc, 1e-7,
                             SlackKind::LE);
}

CheckReport check_gradient_fd(const GammaSolution& sol, long samples,
                              std::uint64_t seed, int threads) {
    const Params& prm = sol.params;
    auto rel_err = [&](long i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        for (int attempt = 0; attempt < 64; ++attempt) {
            double x, y, z;
            if (rng.next_double() < 0.7) {
                z = 1.0;
                x = rng.uniform(0.01, 6.0);
                y = rng.uniform(-0.999, 0.999);
            } else {
                y = (rng.coin_sign() > 0 ? 1.0 : -1.0) * rng.uniform(1.001, 2.0);
                z = rng.uniform(0.3, 0.999 * std::abs(y));
                x = rng.uniform(0.01, 6.0);
            }
            const double m = std::max(std::abs(y), z);
            const double xn = x / m, ayn = std::abs(y) / m;
            const double gx = gamma_eval(sol, std::min(xn, sol.x_max)).value;
            // keep the finite-difference stencil inside one smooth piece
            if (std::abs(ayn - gx) < 1e-3) continue;
            if (std::abs(xn + ayn - 1.0) < 1e-3) continue;
            if (std::abs(std::abs(y) - z) < 1e-3 * m) continue;
            if (std::abs(y) < 1e-3) continue;
            // step scaled with the point: U grows like (x+|y|+z)^p, so a
            // fixed 1e-6 step would drown small gradient components in
            // cancellation noise
            const double hs = 2e-6 * (1.0 + x + std::abs(y) + z);
            const double hx = hs, hy = hs;
            const Grad2 g = U_grad(sol, {x, y, z});
            const double fdx =
                (U_eval(sol, {x + hx, y, z}) - U_eval(sol, {x - hx, y, z})) / (2.0 * hx);
            const double fdy =
                (U_eval(sol, {x, y + hy, z}) - U_eval(sol, {x, y - hy, z})) / (2.0 * hy);
            const double ex = std::abs(g.dx - fdx) / std::max({1.0, std::abs(g.dx)});
            const double ey = std::abs(g.dy - fdy) / std::max({1.0, std::abs(g.dy)});
            return std::max(ex, ey);
        }
        return 0.0;  // could not place a clean stencil; skip
    };
    const ScanResult r = scan_max(samples, rel_err, threads);
    return CheckReport::make("gradient_vs_fd", prm, samples, r.value,
                             fmt_loc("sample_index=%.9g", static_cast<double>(r.index)),
                             1e-6, SlackKind::LE);
}

double empirical_bound_constant(const GammaSolution& sol, long n_per_axis, int threads) {
    const Params& prm = sol.params;
    const long n = n_per_axis;
    const long total = n * n * n;
    auto ratio = [&](long idx) {
        const long iz = idx % n, iy = (idx / n) % n, ix = idx / (n * n);
        const double x = 4.0 * static_cast<double>(ix) / static_cast<double>(n - 1);
        const double y = -4.0 + 8.0 * static_cast<double>(iy) / static_cast<double>(n - 1);
        const double z =
            0.25 * std::pow(16.0, static_cast<double>(iz) / static_cast<double>(n - 1));
        const double base = x + std::abs(y) + z;
        const double bp = std::pow(base, prm.p);
        const double bp1 = std::pow(base, prm.p - 1.0);
        double k = U_eval(sol, {x, y, z}) / bp;
        if (std::abs(std::abs(y) - z) > 1e-6 * std::max(1.0, z) && std::abs(y) > 1e-6) {
            const Grad2 g = U_grad(sol, {x, y, z});
            k = std::max({k, std::abs(g.dx) / bp1, std::abs(g.dy) / bp1});
        }
        return k;
    };
    return scan_max(total, ratio, threads).value;
}

std::vector<CheckReport> run_full_suite(double p, double alpha, const VerifierOptions& opt) {
    const Params prm = make_params(p, alpha);
    const double start_hi = 100.0;
    const double x_max = std::max(opt.x_max, start_hi + 2.0);
    GammaSolution sol = solve_gamma(prm, x_max, 1e-9);
    if (opt.corrupt_gamma) {
        const std::size_t mid = sol.values.size() / 2;
        sol.values[mid] = std::min(sol.values[mid] + 0.05, 0.999999);
    }

    std::vector<CheckReport> out;
    out.push_back(check_gamma_properties(sol, opt.gamma_random_points, opt.seed));
    out.push_back(check_majorization(sol, opt.grid, opt.threads, opt.check_tol));
    out.push_back(check_derivative_inequality(sol, opt.grid, opt.threads, opt.check_tol));
    out.push_back(check_line_concavity(sol, opt.concavity_samples, opt.t_points,
                                       opt.seed + 1, opt.threads, 100.0 * opt.check_tol));
    out.push_back(check_chord_domination(sol, opt.chord_samples, opt.seed + 2, opt.threads,
                                         opt.check_tol));
    {
        std::vector<double> xs;
        xs.reserve(static_cast<std::size_t>(opt.start_points));
        for (long i = 0; i < opt.start_points; ++i)
            xs.push_back(1.0 + (start_hi - 1.0) * static_cast<double>(i) /
                                   static_cast<double>(std::max<long>(1, opt.start_points - 1)));
        out.push_back(check_start_condition(sol, xs, opt.threads, opt.check_tol));
    }
    out.push_back(check_c1_seams(sol, 2000));
    out.push_back(check_gradient_fd(sol, opt.fd_samples, opt.seed + 3, opt.threads));
    return out;
}

}  // namespace maxineq
