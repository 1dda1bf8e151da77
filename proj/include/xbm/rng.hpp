#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace xbm {

using Rng = std::mt19937_64;

/// SplitMix64 step, used to derive independent child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

/// Uniform double in [0,1) consuming exactly one engine call.
inline double draw_uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller, consuming exactly two engine calls.
/// No caching, so draw counts stay aligned between sparse models and their
/// dense twins.
inline double draw_normal(Rng& rng) {
    double u1 = draw_uniform(rng);
    double u2 = draw_uniform(rng);
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double draw_normal(Rng& rng, double mean, double stddev) {
    return mean + stddev * draw_normal(rng);
}

inline bool draw_bernoulli(Rng& rng, double p) {
    return draw_uniform(rng) < p;
}

} // namespace xbm
