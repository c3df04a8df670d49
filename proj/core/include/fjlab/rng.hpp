#pragma once

#include <cmath>
#include <cstdint>

namespace fjlab {

/// Finalizer of the SplitMix64 generator; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// SplitMix64: tiny splittable generator with platform-independent output.
/// Each (seed, run, node) substream is derived by key mixing, so draws are
/// identical no matter which thread executes them or in what order.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t nextU64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double nextDouble() {
        return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe under log() and pow().
    double nextPositiveDouble() { return 1.0 - nextDouble(); }

  private:
    std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t run,
                            std::uint64_t node) {
    std::uint64_t key = mix64(seed + 0x9E3779B97F4A7C15ull * (run + 1));
    key = mix64(key ^ (0xD1B54A32D192ED03ull * (node + 1)));
    return SplitMix64(key);
}

/// Box-Muller without caching so consumption per call is fixed.
inline double sampleStandardNormal(SplitMix64& rng) {
    const double u1 = rng.nextPositiveDouble();
    const double u2 = rng.nextDouble();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
}

/// Marsaglia-Tsang squeeze for Gamma(shape, 1); shapes below 1 are boosted
/// through Gamma(shape + 1) and a power of a uniform.
inline double sampleGamma(SplitMix64& rng, double shape) {
    if (shape < 1.0) {
        const double boost =
            std::pow(rng.nextPositiveDouble(), 1.0 / shape);
        return sampleGamma(rng, shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = sampleStandardNormal(rng);
        const double base = 1.0 + c * x;
        if (base <= 0.0) continue;
        const double v = base * base * base;
        const double u = rng.nextPositiveDouble();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double sampleBeta(SplitMix64& rng, double a, double b) {
    for (;;) {
        const double x = sampleGamma(rng, a);
        const double y = sampleGamma(rng, b);
        if (x + y > 0.0) return x / (x + y);
    }
}

}  // namespace fjlab
