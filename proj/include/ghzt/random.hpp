#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ghzt {

using Rng = std::mt19937_64;

// Uniform double in [0, 1), built from the top 53 bits of the raw draw so a
// given seed produces the same stream on every standard library.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller transform over uniform01 draws.  Two raw draws per variate;
// no state is cached between calls, so call order alone fixes the stream.
inline double standard_normal(Rng& rng) {
    double u = 1.0 - uniform01(rng);  // (0, 1], keeps log(u) finite
    double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
}

// SplitMix64 finalizer, used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace ghzt
