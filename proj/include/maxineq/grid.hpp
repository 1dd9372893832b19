#pragma once

#include <cstdint>
#include <vector>

#include <omp.h>

namespace maxineq {

// Result of an extremal scan: the extreme slack value and the first index
// attaining it.
struct ScanResult {
    double value = 0.0;
    long index = -1;
};

// Serial reference kernels. The OpenMP variants below must produce
// bit-identical results for any thread count: min/max of doubles is exact
// regardless of order, and argmin ties are broken by lowest index in a
// serial pass over the materialized slacks.

template <class F>
ScanResult scan_min_serial(long n, F&& slack) {
    ScanResult r;
    for (long i = 0; i < n; ++i) {
        const double v = slack(i);
        if (r.index < 0 || v < r.value) {
            r.value = v;
            r.index = i;
        }
    }
    return r;
}

template <class F>
ScanResult scan_max_serial(long n, F&& slack) {
    ScanResult r;
    for (long i = 0; i < n; ++i) {
        const double v = slack(i);
        if (r.index < 0 || v > r.value) {
            r.value = v;
            r.index = i;
        }
    }
    return r;
}

// threads == 0 uses the OpenMP default; threads == 1 falls back to the
// serial reference.
template <class F>
ScanResult scan_min(long n, F&& slack, int threads = 0) {
    if (n <= 0) return {};
    if (threads == 1) return scan_min_serial(n, slack);
    std::vector<double> vals(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (long i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = slack(i);
    ScanResult r{vals[0], 0};
    for (long i = 1; i < n; ++i) {
        const double v = vals[static_cast<std::size_t>(i)];
        if (v < r.value) {
            r.value = v;
            r.index = i;
        }
    }
    return r;
}

template <class F>
ScanResult scan_max(long n, F&& slack, int threads = 0) {
    if (n <= 0) return {};
    if (threads == 1) return scan_max_serial(n, slack);
    std::vector<double> vals(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (long i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = slack(i);
    ScanResult r{vals[0], 0};
    for (long i = 1; i < n; ++i) {
        const double v = vals[static_cast<std::size_t>(i)];
        if (v > r.value) {
            r.value = v;
            r.index = i;
        }
    }
    return r;
}

}  // namespace maxineq
