#pragma once

#include <cstdint>
#include <random>

namespace chunknet {

// All randomness in the library flows through one engine type so results are
// reproducible across platforms (mt19937_64 output is fixed by the standard).
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Good avalanche, cheap, stable.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Order-sensitive combine: chain to derive independent stream seeds from a
// master seed plus ids, e.g. mix(mix(master, spec), n), trial).
inline std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t value) {
    return mix64(seed ^ (mix64(value) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2)));
}

template <typename... Ids>
std::uint64_t derive_seed(std::uint64_t master, Ids... ids) {
    std::uint64_t s = mix64(master);
    ((s = seed_combine(s, static_cast<std::uint64_t>(ids))), ...);
    return s;
}

template <typename... Ids>
Rng derive_rng(std::uint64_t master, Ids... ids) {
    return Rng(derive_seed(master, ids...));
}

// Uniform integer in [0, bound) from a single 64-bit draw (multiply-shift).
// The |2^-64| bias is irrelevant at simulation scale and the draw count is
// fixed, which the reproducibility contract needs.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(rng()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

} // namespace chunknet
