#include "sparseconv/mod_hash.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace sparseconv {

std::shared_ptr<const std::vector<std::uint64_t>> primes_in_range(
    std::uint64_t m) {
  if (m < 2) throw std::invalid_argument("primes_in_range: m must be >= 2");
  if (m > (std::uint64_t{1} << 32))
    throw std::invalid_argument("primes_in_range: m too large to sieve");

  static std::mutex mutex;
  static std::map<std::uint64_t, std::shared_ptr<const std::vector<std::uint64_t>>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }

  const std::uint64_t limit = 2 * m;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  auto primes = std::make_shared<std::vector<std::uint64_t>>();
  for (std::uint64_t x = m; x <= limit; ++x)
    if (!composite[x]) primes->push_back(x);

  std::lock_guard lock(mutex);
  // A concurrent caller may have inserted first; either copy is identical.
  return cache.emplace(m, std::move(primes)).first->second;
}

std::uint64_t sample_prime(std::uint64_t m, Rng& rng) {
  const auto primes = primes_in_range(m);
  return (*primes)[uniform_below(rng, primes->size())];
}

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

ModHash::ModHash(std::uint64_t p, std::uint64_t universe)
    : p_(p), universe_(universe) {
  if (!is_prime(p)) throw std::invalid_argument("ModHash: modulus is not prime");
  if (universe == 0) throw std::invalid_argument("ModHash: universe must be >= 1");
}

ModHash ModHash::sample(std::uint64_t m, std::uint64_t universe, Rng& rng) {
  return ModHash(sample_prime(m, rng), universe);
}

std::vector<double> fold(std::span<const double> a, std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("fold: modulus must be >= 1");
  std::vector<double> out(p, 0.0);
  std::size_t bucket = 0;
  for (double x : a) {
    out[bucket] += x;
    if (++bucket == p) bucket = 0;
  }
  return out;
}

bool is_isolated(std::size_t x, std::span<const std::size_t> support,
                 std::uint64_t p) {
  if (std::find(support.begin(), support.end(), x) == support.end())
    throw std::invalid_argument("is_isolated: index " + std::to_string(x) +
                                " is not in the support");
  for (std::size_t y : support)
    if (y != x && y % p == x % p) return false;
  return true;
}

}  // namespace sparseconv
