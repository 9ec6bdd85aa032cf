#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sparseconv/fft.hpp"
#include "sparseconv/mod_hash.hpp"
#include "sparseconv/recover_approx.hpp"

using namespace sparseconv;

namespace {

DenseVector impulse(std::size_t n, std::size_t at) {
  std::vector<double> v(n, 0.0);
  v[at] = 1.0;
  return DenseVector(std::move(v));
}

bool matches(const SparseResult& got, const SparseResult& want, double tol) {
  if (support_of(got) != support_of(want)) return false;
  for (const auto& [i, v] : want)
    if (std::abs(got.at(i) - v) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("approx_schedule") {
  ApproxParams params;
  params.k = 64;
  params.delta = 0.1;
  const auto s = approx_schedule(1 << 14, params);
  CHECK(s.m == 21504);
  CHECK(s.repetitions == 75);
  CHECK(s.min_votes == 38);

  params.k = 1;
  const auto tiny = approx_schedule(8, params);
  CHECK(tiny.m == 16);
  CHECK(tiny.repetitions == 27);

  params.L_mult = 1.0;
  params.delta = 0.9;
  CHECK(approx_schedule(8, params).repetitions == 3);
}

TEST_CASE("ApproxParams validation") {
  auto bad = [](auto mutate) {
    ApproxParams p;
    mutate(p);
    return p;
  };
  CHECK_THROWS_AS(bad([](auto& p) { p.k = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& p) { p.delta = 1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& p) { p.c1 = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& p) { p.tau = 0.5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& p) { p.m_mult = 3.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& p) { p.L_mult = 0.5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](auto& p) { p.min_votes_frac = 0.0; }).validate(), std::invalid_argument);
  CHECK_NOTHROW(ApproxParams{}.validate());
}

TEST_CASE("lower_median") {
  CHECK(lower_median({3, 1, 2}) == 2);
  CHECK(lower_median({4, 1, 3, 2}) == 2);
  CHECK(lower_median({7}) == 7);
  CHECK_THROWS_AS(lower_median({}), std::invalid_argument);
}

TEST_CASE("median survives a minority of corrupted votes") {
  Rng rng(55);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t size = 1 + uniform_below(rng, 40);
    std::vector<double> votes(size);
    for (auto& v : votes) v = 10.0 + uniform_unit(rng);
    const std::size_t bad = (size - 1) / 2;
    std::vector<double> clean(votes.begin() + bad, votes.end());
    for (std::size_t i = 0; i < bad; ++i)
      votes[i] = uniform_unit(rng) < 0.5 ? -1e9 * uniform_unit(rng) : 1e9 * uniform_unit(rng);
    const double med = lower_median(votes);
    CHECK(med >= *std::min_element(clean.begin(), clean.end()));
    CHECK(med <= *std::max_element(clean.begin(), clean.end()));
  }
}

TEST_CASE("approx_sparse_convolve small cases") {
  ApproxParams params;
  params.k = 1;
  CHECK(approx_sparse_convolve(DenseVector::zeros(16), DenseVector::zeros(16), params).empty());

  const auto got = approx_sparse_convolve(impulse(16, 2), impulse(16, 3), params);
  REQUIRE(got.size() == 1);
  CHECK(got.begin()->first == 5);
  CHECK(std::abs(got.begin()->second - 1.0) <= 0.01);

  CHECK_THROWS_AS(approx_sparse_convolve(impulse(4, 0), impulse(5, 0), params),
                  std::invalid_argument);
}

TEST_CASE("approx_sparse_convolve reports work") {
  ApproxParams params;
  params.k = 4;
  RunStats stats;
  approx_sparse_convolve(impulse(64, 1), impulse(64, 7), params, &stats);
  const auto sched = approx_schedule(64, params);
  CHECK(stats.sketches == sched.repetitions);
  CHECK(stats.transforms == 3 * sched.repetitions);
  CHECK(stats.fft_work > 0);
}

TEST_CASE("approx_sparse_convolve recovers random sparse instances") {
  const std::size_t n = 1 << 12;
  int successes = 0;
  constexpr int kRuns = 20;
  for (int run = 0; run < kRuns; ++run) {
    Rng rng(1000 + run);
    const auto a = testing::sparse_integer_vector(rng, n, 6, 10);
    const auto b = testing::sparse_integer_vector(rng, n, 6, 10);
    const auto truth = testing::significant_entries(naive_convolve(a, b), 0.5);
    ApproxParams params;
    params.k = 36;
    params.seed = run;
    successes += matches(approx_sparse_convolve(a, b, params), truth, 0.01);
  }
  CHECK(successes >= 18);
}

TEST_CASE("approx_sparse_convolve is deterministic across thread counts") {
  Rng rng(77);
  const std::size_t n = 1 << 11;
  const auto a = testing::sparse_integer_vector(rng, n, 8, 10);
  const auto b = testing::sparse_integer_vector(rng, n, 8, 10);
  ApproxParams params;
  params.k = 64;
  params.seed = 5;
  params.threads = 1;
  const auto serial = approx_sparse_convolve(a, b, params);
  params.threads = 4;
  CHECK(approx_sparse_convolve(a, b, params) == serial);
  CHECK(approx_sparse_convolve(a, b, params) == serial);
  params.seed = 6;
  CHECK(approx_sparse_convolve(a, b, params).size() > 0);
}

TEST_CASE("a fixed significant index is rarely non-isolated") {
  // Smaller cousin of the isolation-probability acceptance criterion.
  Rng rng(8080);
  const std::size_t n = 1 << 12;
  const std::size_t k = 32;
  std::vector<std::size_t> support;
  while (support.size() < k) {
    const auto x = uniform_below(rng, 2 * n - 1);
    if (std::find(support.begin(), support.end(), x) == support.end()) support.push_back(x);
  }
  ApproxParams params;
  params.k = k;
  const auto m = approx_schedule(n, params).m;
  int non_isolated = 0;
  constexpr int kPrimes = 1000;
  for (int t = 0; t < kPrimes; ++t)
    non_isolated += !is_isolated(support[0], support, sample_prime(m, rng));
  CHECK(double(non_isolated) / kPrimes <= 0.25 + 0.05);
}
