#pragma once

// Seeded randomness shared by every module.
//
// Two flavours are used: a stateful engine (`Rng`) that callers own and pass
// explicitly, and a counter-based mixer (`mix64`) for values that must be
// re-derivable from (seed, index...) without replaying a stream, such as key
// noise and per-trial seeds.

#include <cstdint>
#include <random>

namespace wepa {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

// Uniform on the 2^-53 grid of [0, 1).
constexpr double bits_to_unit53(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(Rng& rng) { return bits_to_unit53(rng()); }

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace wepa
