#pragma once

#include <cstdint>
#include <random>

namespace sparseconv {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a list of ids.
template <typename... Ids>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Ids... ids) {
  ((seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(ids)))), ...);
  return seed;
}

// The distributions in <random> are implementation-defined, so draws that end
// up in reports go through these two helpers instead.

/// Uniform integer in [0, bound). bound must be nonzero.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sparseconv
