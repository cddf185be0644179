#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fcesched {

using Rng = std::mt19937_64;

/// Seed used when a command is run without `--seed`.
inline constexpr std::uint64_t kDefaultSeed = 20240611;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a path of
/// indices (trial, iteration, block, ...). Identical paths give identical
/// seeds no matter which thread asks, so parallel and serial runs agree.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t p : path) {
        s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    }
    return s;
}

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(base, path));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace fcesched
