#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rwalk {

// Seeded generator used everywhere. All derived draws are implemented here on
// top of raw mt19937_64 output so that streams are reproducible across
// platforms for a fixed build of this library:
//   - uniform01(): 53-bit mantissa in [0,1)
//   - below(n): unbiased rejection sampling
//   - normal(): Box-Muller, two uniforms per call, cosine branch only
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // in [0,1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // in (0,1]
    double uniform01_open_low() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    // uniform over {0, 1, ..., n-1}; n must be positive
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (-n) % n;
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
};

// SplitMix64 step; used to derive independent seeds from one master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace rwalk
