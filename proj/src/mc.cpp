#include "maxineq/mc.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include <omp.h>

namespace maxineq {

namespace {

constexpr long kChunk = 4096;

struct Sums {
    long double g = 0.0L, g2 = 0.0L;
    long double f = 0.0L, f2 = 0.0L;
    long double fs = 0.0L, fs2 = 0.0L;
    void add(const Sums& o) {
        g += o.g;
        g2 += o.g2;
        f += o.f;
        f2 += o.f2;
        fs += o.fs;
        fs2 += o.fs2;
    }
};

Sums run_chunk(const PathFn& gen, double p, long lo, long hi, std::uint64_t seed) {
    Sums s;
    for (long i = lo; i < hi; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const PathSample ps = gen(rng);
        const long double gp = powl(static_cast<long double>(ps.gstar), p);
        const long double fp = powl(static_cast<long double>(ps.f_term_abs), p);
        const long double fsp = powl(static_cast<long double>(ps.fstar), p);
        s.g += gp;
        s.g2 += gp * gp;
        s.f += fp;
        s.f2 += fp * fp;
        s.fs += fsp;
        s.fs2 += fsp * fsp;
    }
    return s;
}

McResult finalize(const Sums& s, double p, long n) {
    const long double nl = static_cast<long double>(n);
    auto se = [&](long double sum, long double sum2) {
        const long double mean = sum / nl;
        const long double var = std::max(0.0L, (sum2 - nl * mean * mean) / (nl - 1.0L));
        return static_cast<double>(sqrtl(var / nl));
    };
    McResult r;
    r.n_paths = n;
    r.est.p = p;
    r.est.e_gstar_p = static_cast<double>(s.g / nl);
    r.est.e_f_p = static_cast<double>(s.f / nl);
    r.est.e_fstar_p = static_cast<double>(s.fs / nl);
    r.se_gstar_p = se(s.g, s.g2);
    r.se_f_p = se(s.f, s.f2);
    r.se_fstar_p = se(s.fs, s.fs2);
    r.est.ratio = std::pow(r.est.e_gstar_p / r.est.e_f_p, 1.0 / p);
    const double rel = (1.0 / p) * std::sqrt(std::pow(r.se_gstar_p / r.est.e_gstar_p, 2) +
                                             std::pow(r.se_f_p / r.est.e_f_p, 2));
    r.se_ratio = r.est.ratio * rel;
    return r;
}

}  // namespace

McResult mc_estimate(const PathFn& gen, double p, long n_paths, std::uint64_t seed,
                     int threads) {
    if (n_paths < 100) throw std::invalid_argument("mc_estimate: need at least 100 paths");
    const long n_chunks = (n_paths + kChunk - 1) / kChunk;
    std::vector<Sums> partial(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (long c = 0; c < n_chunks; ++c) {
        const long lo = c * kChunk;
        const long hi = std::min(n_paths, lo + kChunk);
        partial[static_cast<std::size_t>(c)] = run_chunk(gen, p, lo, hi, seed);
    }
    Sums total;
    for (const Sums& s : partial) total.add(s);
    return finalize(total, p, n_paths);
}

McResult mc_estimate_serial(const PathFn& gen, double p, long n_paths,
                            std::uint64_t seed) {
    if (n_paths < 100) throw std::invalid_argument("mc_estimate: need at least 100 paths");
    const long n_chunks = (n_paths + kChunk - 1) / kChunk;
    Sums total;
    for (long c = 0; c < n_chunks; ++c) {
        const long lo = c * kChunk;
        const long hi = std::min(n_paths, lo + kChunk);
        const Sums s = run_chunk(gen, p, lo, hi, seed);
        total.add(s);
    }
    return finalize(total, p, n_paths);
}

PathFn tree_path_sampler(const FiniteAdaptedTree& tree) {
    // capture by value so the sampler owns its data
    const auto nodes = tree.nodes();
    const double f0 = tree.f0(), g0 = tree.g0();
    const std::int32_t root = tree.root();
    return [nodes, f0, g0, root](Rng& rng) {
        PathSample ps{std::abs(g0), std::abs(f0), std::abs(f0)};
        double f = f0, g = g0;
        std::int32_t cur = root;
        while (cur >= 0) {
            const TreeNode& node = nodes[static_cast<std::size_t>(cur)];
            const double u = rng.next_double();
            double acc = 0.0;
            const TreeBranch* chosen = &node.branches.back();
            for (const TreeBranch& b : node.branches) {
                acc += b.prob;
                if (u < acc) {
                    chosen = &b;
                    break;
                }
            }
            f += chosen->df;
            g += chosen->dg;
            ps.gstar = std::max(ps.gstar, std::abs(g));
            ps.fstar = std::max(ps.fstar, std::abs(f));
            cur = chosen->child;
        }
        ps.f_term_abs = std::abs(f);
        return ps;
    };
}

PathFn walk_transform_sampler(int depth, double sigma,
                              std::function<double(int)> sign_fn) {
    if (depth < 1) throw std::invalid_argument("walk_transform_sampler: depth >= 1");
    std::vector<double> signs(static_cast<std::size_t>(depth) + 1);
    for (int d = 0; d <= depth; ++d) {
        signs[static_cast<std::size_t>(d)] = sign_fn(d);
        if (std::abs(signs[static_cast<std::size_t>(d)]) > 1.0)
            throw std::invalid_argument("walk_transform_sampler: |v| > 1");
    }
    return [depth, sigma, signs](Rng& rng) {
        double f = 0.0, g = 0.0;
        PathSample ps{0.0, 0.0, 0.0};
        for (int k = 1; k <= depth; ++k) {
            const double df = sigma * rng.coin_sign();
            f += df;
            g += signs[static_cast<std::size_t>(k)] * df;
            ps.gstar = std::max(ps.gstar, std::abs(g));
            ps.fstar = std::max(ps.fstar, std::abs(f));
        }
        ps.f_term_abs = std::abs(f);
        return ps;
    };
}

std::string mc_to_csv(const McResult& r) {
    char buf[160];
    std::string out = "quantity,n_paths,estimate,stderr\n";
    std::snprintf(buf, sizeof(buf), "e_gstar_p,%ld,%.17g,%.17g\n", r.n_paths,
                  r.est.e_gstar_p, r.se_gstar_p);
    out += buf;
    std::snprintf(buf, sizeof(buf), "e_f_p,%ld,%.17g,%.17g\n", r.n_paths, r.est.e_f_p,
                  r.se_f_p);
    out += buf;
    std::snprintf(buf, sizeof(buf), "e_fstar_p,%ld,%.17g,%.17g\n", r.n_paths,
                  r.est.e_fstar_p, r.se_fstar_p);
    out += buf;
    std::snprintf(buf, sizeof(buf), "ratio,%ld,%.17g,%.17g\n", r.n_paths, r.est.ratio,
                  r.se_ratio);
    out += buf;
    return out;
}

}  // namespace maxineq
