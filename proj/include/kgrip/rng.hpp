#pragma once

#include <cstdint>
#include <random>

namespace kgrip {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for (tag, index) under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ tag) ^ index);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t tag, std::uint64_t index = 0) {
    return Rng(derive_seed(master, tag, index));
}

// Stream tags used across the solvers. Keeping them in one place keeps runs
// reproducible regardless of which phases a heuristic actually uses.
namespace stream {
inline constexpr std::uint64_t kUstInitial = 1;
inline constexpr std::uint64_t kUstUpdate = 2;
inline constexpr std::uint64_t kCandidates = 3;
inline constexpr std::uint64_t kSketch = 4;
inline constexpr std::uint64_t kSpectral = 5;
inline constexpr std::uint64_t kFocus = 6;
} // namespace stream

} // namespace kgrip
