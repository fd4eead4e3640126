#pragma once

#include <cstdint>
#include <random>

namespace iacopt::moea {

using Rng = std::mt19937_64;

/// Uniform index in [0, n). Uses the raw engine output so that sequences are
/// identical across standard libraries.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
}

/// Uniform real in [0, 1) from the top 53 bits of the engine output.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin_flip(Rng& rng) { return (rng() & 1u) != 0; }

}  // namespace iacopt::moea
