#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace coevo {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stable order-sensitive hash of a list of 64-bit words. Used to derive
// independent sub-seeds from a master seed.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = 0x6A09E667F3BCC908ULL;
    for (auto w : words) h = mix64(h ^ mix64(w));
    return h;
}

std::uint64_t double_bits(double v) noexcept;

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), unbiased (rejection on the low zone).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace coevo
