#pragma once

#include <cstdint>
#include <cmath>

namespace sn {

// Counter-based deterministic random stream.  Every draw is a pure function
// of (seed, step, stream, index, salt), so simulation results do not depend
// on evaluation order and are bit-reproducible across platforms.
//
// Streams used by the engine:
//   0 process noise, 1 measurement noise, 2 fault noise,
//   3 LSI value draws, 4 network weight draws.

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t step,
                         std::uint64_t stream, std::uint64_t index,
                         std::uint64_t salt) {
    std::uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ull);
    h = splitmix64(h ^ step);
    h = splitmix64(h ^ (stream << 48));
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ (salt * 0x452821e638d01377ull));
    return h;
}

// Uniform on the open interval (0,1); never returns 0 or 1 exactly, which
// keeps the Box-Muller log() finite.
inline double uniform01(std::uint64_t seed, std::uint64_t step,
                        std::uint64_t stream, std::uint64_t index,
                        std::uint64_t salt = 0) {
    const std::uint64_t h = key(seed, step, stream, index, salt);
    return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

inline double uniform(std::uint64_t seed, std::uint64_t step,
                      std::uint64_t stream, std::uint64_t index,
                      double lo, double hi, std::uint64_t salt = 0) {
    return lo + (hi - lo) * uniform01(seed, step, stream, index, salt);
}

// Standard normal via the Box-Muller transform on two independent
// counter draws (salts 0 and 1 of the same key tuple).
inline double normal(std::uint64_t seed, std::uint64_t step,
                     std::uint64_t stream, std::uint64_t index) {
    const double u1 = uniform01(seed, step, stream, index, 0);
    const double u2 = uniform01(seed, step, stream, index, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

} // namespace rng
} // namespace sn
