// Command-line front-end: solve the boundary curve, certify the special
// function, run tree/Monte Carlo simulations, and sweep the sharpness
// witnesses. All commands are deterministic for a fixed flag set.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maxineq/ito.hpp"
#include "maxineq/mc.hpp"
#include "maxineq/sharpness.hpp"
#include "maxineq/verifier.hpp"

namespace {

using namespace maxineq;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << text;
}

std::vector<double> seeded_pm1_sequence(std::uint64_t seed, long n) {
    Rng rng(seed ^ 0xABCD1234ULL);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.coin_sign();
    return v;
}

struct CommonOpts {
    double p = 2.0;
    double alpha = 1.0;
    std::uint64_t seed = 12345;
    int workers = 0;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_alpha = true) {
    cmd->add_option("--p", c.p, "moment exponent, >= 2");
    if (with_alpha) cmd->add_option("--alpha", c.alpha, "subordination strength");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--workers", c.workers, "worker threads (0 = all)")
        ->envname("MAXINEQ_WORKERS");
    cmd->add_option("--out", c.out, "output file (default stdout)");
}

int cmd_gamma(const CommonOpts& c, double x_max, double tol_ode,
              const std::string& csv_path) {
    const Params prm = make_params(c.p, c.alpha);
    const GammaSolution sol = solve_gamma(prm, x_max, tol_ode);
    write_text(c.out, gamma_to_json(sol) + "\n");
    if (!csv_path.empty())
        write_text(csv_path, gamma_to_csv(sol, std::min(x_max, 16.0), 0.005));
    return kExitOk;
}

int cmd_figure1(const CommonOpts& c, double x_hi, double step) {
    const Params prm = make_params(c.p, c.alpha);
    const GammaSolution sol = solve_gamma(prm, std::max(2.0 * x_hi, 8.0), 1e-9);
    write_text(c.out, gamma_to_csv(sol, x_hi, step));
    return kExitOk;
}

int cmd_verify(const CommonOpts& c, std::vector<double> ps, std::vector<double> alphas,
               long grid_points, double tol_check, double x_max, bool corrupt) {
    if (ps.empty()) ps = {2.0, 2.5, 3.0, 4.0};
    if (alphas.empty()) alphas = {0.25, 0.5, 1.0};

    VerifierOptions opt;
    opt.seed = c.seed;
    opt.threads = c.workers;
    opt.check_tol = tol_check;
    opt.x_max = x_max;
    opt.corrupt_gamma = corrupt;
    if (grid_points > 0) {
        opt.grid.ny = 380;
        opt.grid.nx = std::max<long>(4, grid_points / (opt.grid.ny + 14));
    }

    std::string lines;
    bool ok = true;
    CheckReport worst;
    bool have_worst = false;
    for (double p : ps) {
        for (double alpha : alphas) {
            const std::vector<CheckReport> reports = run_full_suite(p, alpha, opt);
            for (const CheckReport& r : reports) {
                lines += report_to_json_line(r) + "\n";
                if (!r.pass) {
                    ok = false;
                    if (!have_worst || std::abs(r.worst_slack) > std::abs(worst.worst_slack)) {
                        worst = r;
                        have_worst = true;
                    }
                }
            }
        }
    }
    write_text(c.out, lines);
    if (!ok) {
        std::fprintf(stderr, "verify: FAILED %s\n", report_to_json_line(worst).c_str());
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_simulate(const CommonOpts& c, long paths, long steps) {
    // alpha = 0 runs the martingale +-1-transform case with constant p;
    // alpha > 0 runs the alpha-strong submartingale case built on the
    // reflected walk, with constant (alpha+1)p.
    double bound;
    McResult res;
    if (c.alpha == 0.0) {
        const Params prm = make_params(c.p, 1.0);  // validates p only
        bound = prm.p;
        const std::vector<double> signs = seeded_pm1_sequence(c.seed, steps + 1);
        const double sigma = 1.0 / std::sqrt(static_cast<double>(steps));
        const PathFn gen = walk_transform_sampler(
            static_cast<int>(steps), sigma,
            [signs](int k) { return signs[static_cast<std::size_t>(k)]; });
        res = mc_estimate(gen, c.p, paths, c.seed, c.workers);
    } else {
        const Params prm = make_params(c.p, c.alpha);
        bound = prm.cap1;
        const std::vector<double> signs = seeded_pm1_sequence(c.seed, steps + 1);
        const double alpha = c.alpha;
        const Integrand phi = [signs](long k) {
            return signs[static_cast<std::size_t>(k)];
        };
        const Integrand psi = [signs, alpha](long k) {
            return alpha * signs[static_cast<std::size_t>(k)];
        };
        const PathFn gen =
            reflected_ito_sampler(steps, 1.0 / static_cast<double>(steps), phi, psi, alpha);
        res = mc_estimate(gen, c.p, paths, c.seed, c.workers);
    }
    write_text(c.out, mc_to_csv(res));
    nlohmann::json j;
    j["command"] = "simulate";
    j["p"] = c.p;
    j["alpha"] = c.alpha;
    j["bound"] = bound;
    j["ratio"] = res.est.ratio;
    j["ratio_se"] = res.se_ratio;
    j["within_bound"] = res.est.ratio <= bound;
    std::printf("%s\n", j.dump().c_str());
    return res.est.ratio <= bound ? kExitOk : kExitCheckFailed;
}

int cmd_ito(const CommonOpts& c, long paths, long steps, const std::string& integrand) {
    const Params prm = make_params(c.p, c.alpha);
    const double bound = prm.cap1;  // (alpha+1)p; equals 2p when alpha = 1
    Integrand base;
    if (integrand == "alternating") base = alternating_integrand();
    else if (integrand == "constant") base = constant_integrand(1.0);
    else throw CLI::ValidationError("--integrand must be alternating or constant");
    const double alpha = c.alpha;
    const Integrand psi = [base, alpha](long k) { return alpha * base(k); };
    const PathFn gen =
        reflected_ito_sampler(steps, 1.0 / static_cast<double>(steps), base, psi, alpha);
    const McResult res = mc_estimate(gen, c.p, paths, c.seed, c.workers);
    write_text(c.out, mc_to_csv(res));
    nlohmann::json j;
    j["command"] = "ito";
    j["p"] = c.p;
    j["alpha"] = c.alpha;
    j["steps"] = steps;
    j["bound"] = bound;
    j["ratio"] = res.est.ratio;
    j["ratio_se"] = res.se_ratio;
    j["within_bound_3se"] = res.est.ratio + 3.0 * res.se_ratio <= bound;
    std::printf("%s\n", j.dump().c_str());
    return (res.est.ratio <= bound) ? kExitOk : kExitCheckFailed;
}

int cmd_sharpness(const CommonOpts& c, const std::string& mode_s,
                  std::vector<double> deltas, std::vector<long> rounds) {
    SharpnessMode mode;
    if (mode_s == "martingale") mode = SharpnessMode::Martingale;
    else if (mode_s == "submartingale") mode = SharpnessMode::Submartingale;
    else throw CLI::ValidationError("--mode must be martingale or submartingale");
    if (deltas.empty())
        deltas = (mode == SharpnessMode::Martingale)
                     ? std::vector<double>{0.1, 0.05, 0.025, 0.0125}
                     : std::vector<double>{0.02, 0.01, 0.005, 0.0025};
    if (mode == SharpnessMode::Martingale) make_params(c.p, 1.0);
    else make_params(c.p, c.alpha);

    const std::vector<SharpnessRow> rows = ratio_sweep(mode, c.p, c.alpha, deltas, rounds);
    write_text(c.out, sweep_to_csv(mode, c.p, c.alpha, rows));
    std::printf("%s\n", sweep_summary_json(mode, c.p, c.alpha, rows).c_str());
    const double bound = sharpness_bound(mode, c.p, c.alpha);
    for (const SharpnessRow& r : rows)
        if (r.ratio > bound || r.ratio_strong > bound) return kExitCheckFailed;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construction and numerical certification of the sharp maximal "
                 "inequality |g*|_p <= (alpha+1) p |f|_p"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags take precedence");

    CommonOpts cg, cf, cv, cs, ci, csh;

    auto* gamma = app.add_subcommand("gamma", "solve the boundary curve, emit JSON");
    double g_xmax = 64.0, g_tol = 1e-9;
    std::string g_csv;
    add_common(gamma, cg);
    gamma->add_option("--x-max", g_xmax, "right end of the solved range");
    gamma->add_option("--tol-ode", g_tol, "ODE residual tolerance");
    gamma->add_option("--csv", g_csv, "also write (x, gamma, gamma') rows here");

    auto* fig = app.add_subcommand("figure1", "emit the curve as plot-ready CSV");
    double f_xhi = 10.0, f_step = 0.005;
    cf.p = 3.0;
    cf.alpha = 1.0;
    add_common(fig, cf);
    fig->add_option("--x-hi", f_xhi, "last x value");
    fig->add_option("--step", f_step, "x spacing");

    auto* ver = app.add_subcommand("verify", "run the full certification suite");
    std::vector<double> v_ps, v_alphas;
    long v_grid = 0;
    double v_tol = 1e-9, v_xmax = 64.0;
    bool v_corrupt = false;
    add_common(ver, cv);
    ver->add_option("--p-set", v_ps, "p values (default 2 2.5 3 4)");
    ver->add_option("--alpha-set", v_alphas, "alpha values (default 0.25 0.5 1)");
    ver->add_option("--grid", v_grid, "approximate grid point count");
    ver->add_option("--tol-check", v_tol, "slack tolerance for the grid checks");
    ver->add_option("--x-max", v_xmax, "curve range for evaluation");
    ver->add_flag("--corrupt-gamma", v_corrupt,
                  "test hook: corrupt the curve and expect failure")
        ->group("");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo moment estimates");
    long s_paths = 100000, s_steps = 64;
    add_common(sim, cs);
    sim->add_option("--paths", s_paths, "number of sample paths");
    sim->add_option("--steps", s_steps, "steps per path");

    auto* ito = app.add_subcommand("ito", "stochastic-integral discretization check");
    long i_paths = 50000, i_steps = 1000;
    std::string i_integrand = "alternating";
    add_common(ito, ci);
    ito->add_option("--paths", i_paths, "number of sample paths");
    ito->add_option("--steps", i_steps, "time steps (dt = 1/steps)");
    ito->add_option("--integrand", i_integrand, "alternating | constant");

    auto* sh = app.add_subcommand("sharpness", "extremal witness ratio sweep");
    std::string sh_mode = "martingale";
    std::vector<double> sh_deltas;
    std::vector<long> sh_rounds;
    add_common(sh, csh);
    sh->add_option("--mode", sh_mode, "martingale | submartingale");
    sh->add_option("--delta", sh_deltas, "step sizes (defaults per mode)");
    sh->add_option("--rounds", sh_rounds, "rounds per delta (default: auto)");

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gamma->parsed()) return cmd_gamma(cg, g_xmax, g_tol, g_csv);
        if (fig->parsed()) return cmd_figure1(cf, f_xhi, f_step);
        if (ver->parsed())
            return cmd_verify(cv, v_ps, v_alphas, v_grid, v_tol, v_xmax, v_corrupt);
        if (sim->parsed()) return cmd_simulate(cs, s_paths, s_steps);
        if (ito->parsed()) return cmd_ito(ci, i_paths, i_steps, i_integrand);
        if (sh->parsed()) return cmd_sharpness(csh, sh_mode, sh_deltas, sh_rounds);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
