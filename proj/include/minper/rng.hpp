#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace minper {

using Rng = std::mt19937_64;

// Derives a decorrelated seed for stream `index` from a master seed.
// splitmix64 finalizer; identical on every platform.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
    return Rng(stream_seed(master, index));
}

// Uniform in [0,1).  Hand-pinned mapping (53 high bits) so results do not
// depend on the standard library's distribution implementation.
inline double uniform01(Rng& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

// Standard normal via Box-Muller.  One value per call; the partner value is
// discarded to keep the draw count predictable.
inline double gaussian(Rng& g) {
    double u1 = uniform01(g);
    double u2 = uniform01(g);
    if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

} // namespace minper
