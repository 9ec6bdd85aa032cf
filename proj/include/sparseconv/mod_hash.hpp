#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sparseconv/random.hpp"

namespace sparseconv {

/// All primes in [m, 2m], ascending. Sieved once per m and cached for the
/// lifetime of the process; safe to call concurrently.
std::shared_ptr<const std::vector<std::uint64_t>> primes_in_range(
    std::uint64_t m);

/// Uniformly random prime in [m, 2m]. Requires m >= 2.
std::uint64_t sample_prime(std::uint64_t m, Rng& rng);

bool is_prime(std::uint64_t x);

/// x -> x mod p over keys in [0, universe).
class ModHash {
 public:
  ModHash(std::uint64_t p, std::uint64_t universe);

  static ModHash sample(std::uint64_t m, std::uint64_t universe, Rng& rng);

  std::uint64_t prime() const { return p_; }
  std::uint64_t universe() const { return universe_; }
  std::uint64_t operator()(std::uint64_t x) const { return x % p_; }

 private:
  std::uint64_t p_;
  std::uint64_t universe_;
};

/// Length-p vector whose entry i sums a_j over j = i (mod p).
std::vector<double> fold(std::span<const double> a, std::uint64_t p);

/// True iff no other element of `support` shares x's residue mod p. Throws
/// std::invalid_argument if x is not in `support`.
bool is_isolated(std::size_t x, std::span<const std::size_t> support,
                 std::uint64_t p);

}  // namespace sparseconv
