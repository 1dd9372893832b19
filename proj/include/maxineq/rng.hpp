#pragma once

#include <cmath>
#include <cstdint>

namespace maxineq {

// Counter-style generator built on splitmix64. Cheap to construct, so every
// grid point / MC path gets its own stream keyed by (seed, stream); results
// do not depend on how work is split across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(bootstrap(seed, 0)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : state_(bootstrap(seed, stream)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // integer in [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // standard normal, Box-Muller with one value cached
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    int coin_sign() { return (next_u64() & 1ULL) ? 1 : -1; }

private:
    static std::uint64_t bootstrap(std::uint64_t seed, std::uint64_t stream) {
        // decorrelate (seed, stream) pairs before first use
        std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
        Rng tmp;
        tmp.state_ = s;
        tmp.next_u64();
        std::uint64_t out = tmp.next_u64();
        return out;
    }
    Rng() : state_(0) {}

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace maxineq
