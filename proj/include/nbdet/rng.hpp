#pragma once

// Seed splitting and platform-stable Gaussian draws. Every stochastic
// experiment takes an explicit 64-bit seed; independent streams are derived
// by hashing (seed, stream id) so concurrent workers never share state.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace nbdet {

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream));
}

// Uniform double in (0,1]; never returns 0 so log() is safe.
inline double uniform_unit(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller pair of independent standard normals. std::normal_distribution
// is implementation-defined, this is bit-reproducible everywhere.
inline std::pair<double, double> gaussian_pair(std::mt19937_64& eng) {
    const double u1 = uniform_unit(eng);
    const double u2 = uniform_unit(eng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace nbdet
