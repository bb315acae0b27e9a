#pragma once

#include <cmath>
#include <cstdint>

namespace flowcast {

/// Deterministic 64-bit generator (splitmix64). The standard <random>
/// distributions are not bit-identical across library implementations, so all
/// stochastic code in the project draws through this one.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive, unbiased via rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1ULL;
        if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return lo + static_cast<std::int64_t>(x % range);
    }

    /// Standard normal via Box-Muller. Uses two uniforms per draw; no cached
    /// spare, so the draw sequence is a pure function of the call count.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::uint64_t state_;
};

/// Derives the seed for sub-task `counter` (trial index, repeat index, ...)
/// from a master seed. Documented scheme: master XOR (counter+1)*odd-constant,
/// so repeats and trials are individually reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return master ^ ((counter + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace flowcast
