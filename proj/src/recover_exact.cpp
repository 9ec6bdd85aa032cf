#include "sparseconv/recover_exact.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "sparseconv/fft.hpp"
#include "sparseconv/mod_hash.hpp"
#include "sparseconv/parallel.hpp"
#include "sparseconv/random.hpp"
#include "sparseconv/sketch.hpp"

namespace sparseconv {
namespace {

constexpr std::uint64_t kBootstrapStream = 0xB0;
constexpr std::uint64_t kLevelStream = 0xC0;

void add_stats(RunStats* stats, const FftCounter& counter, std::size_t sketches) {
  if (!stats) return;
  stats->fft_work += counter.work.load();
  stats->transforms += counter.transforms.load();
  stats->sketches += sketches;
}

void accumulate(SparseResult& c, std::size_t index, double increment, double tau) {
  auto [it, inserted] = c.try_emplace(index, 0.0);
  it->second += increment;
  if (std::abs(it->second) <= tau) c.erase(it);
}

}  // namespace

void ExactParams::validate() const {
  approx.validate();
  if (!(m_mult_exact >= 1.0)) throw std::invalid_argument("m_mult_exact must be >= 1");
  if (!(R_mult >= 1.0)) throw std::invalid_argument("R_mult must be >= 1");
  if (!(level_base > 1.0)) throw std::invalid_argument("level_base must be > 1");
}

std::size_t ExactSchedule::total_repetitions() const {
  return std::accumulate(repetitions.begin(), repetitions.end(), std::size_t{0});
}

ExactSchedule exact_schedule(std::size_t n, const ExactParams& params) {
  const auto k = params.approx.k;
  const double log_k = std::max(ceil_log2(k), 1u);
  const double m = std::ceil(params.m_mult_exact * double(k) * ceil_log2(n) * log_k * log_k);

  ExactSchedule s;
  s.m = std::max<std::uint64_t>(static_cast<std::uint64_t>(m), 16);
  const double log2k = std::log2(double(k));
  s.levels = 1;
  if (log2k > 1.0)
    s.levels = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(std::log(log2k) / std::log(params.level_base))), 1);

  const double head = params.R_mult * std::log2(2.0 * double(s.levels) / params.approx.delta);
  for (std::size_t l = 1; l <= s.levels; ++l) {
    const double r = std::ceil(head / std::pow(params.level_base, double(l - 1)));
    s.repetitions.push_back(std::max<std::size_t>(static_cast<std::size_t>(std::max(r, 0.0)), 1));
  }
  return s;
}

SparseResult run_correction_levels(const DenseVector& a, const DenseVector& b,
                                   SparseResult start, const ExactParams& params,
                                   std::size_t level_count, RunStats* stats,
                                   ExactTrace* trace) {
  params.validate();
  const SketchOperands ops(a, b);
  const auto sched = exact_schedule(ops.n(), params);
  const auto& ap = params.approx;
  SparseResult c = std::move(start);

  FftCounter counter;
  std::size_t sketches = 0;
  const std::size_t levels = std::min(level_count, sched.levels);
  for (std::size_t l = 1; l <= levels; ++l) {
    const std::size_t reps = sched.repetitions[l - 1];

    // argmax_r |supp_{>=c1}(V_r)|, ties to the smallest r. Only the current
    // best sketch is kept alive.
    struct Best {
      std::size_t count = 0;
      std::size_t r = 0;
      Sketch sketch;
    };
    std::optional<Best> best;
    std::mutex best_mutex;
    parallel_for(reps, ap.threads, [&](std::size_t r) {
      Rng rng(derive_seed(ap.seed, kLevelStream, l, r));
      const auto p = sample_prime(sched.m, rng);
      auto sketch = build_residual_sketch(ops, c, p, &counter);
      std::size_t count = 0;
      for (double v : sketch.v) count += std::abs(v) >= ap.c1;
      std::lock_guard lock(best_mutex);
      if (!best || count > best->count || (count == best->count && r < best->r))
        best = Best{count, r, std::move(sketch)};
    });
    sketches += reps;

    for (const auto& cand : extract_candidates(best->sketch, ap.c1, ap.tau, ops.out_len())) {
      const double increment =
          params.integer_mode ? static_cast<double>(round_to_int(cand.value)) : cand.value;
      accumulate(c, cand.index, increment, ap.tau);
    }
    if (trace) {
      trace->levels.push_back(c);
      trace->chosen_primes.push_back(best->sketch.p);
    }
  }

  add_stats(stats, counter, sketches);
  return c;
}

SparseResult exact_sparse_convolve(const DenseVector& a, const DenseVector& b,
                                   const ExactParams& params, RunStats* stats,
                                   ExactTrace* trace) {
  params.validate();
  ApproxParams boot = params.approx;
  boot.delta = params.approx.delta / 2.0;
  boot.seed = derive_seed(params.approx.seed, kBootstrapStream);
  SparseResult c0 = approx_sparse_convolve(a, b, boot, stats);
  if (params.integer_mode) {
    SparseResult rounded;
    for (const auto& [index, value] : c0)
      accumulate(rounded, index, static_cast<double>(round_to_int(value)), params.approx.tau);
    c0 = std::move(rounded);
  }
  if (trace) {
    trace->levels.assign(1, c0);
    trace->chosen_primes.clear();
  }
  const auto levels = exact_schedule(a.size(), params).levels;
  return run_correction_levels(a, b, std::move(c0), params, levels, stats, trace);
}

std::size_t residual_norm(const DenseVector& a, const DenseVector& b,
                          const SparseResult& c, double c1, std::uint64_t m,
                          std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("residual_norm: trials must be >= 1");
  const SketchOperands ops(a, b);
  std::vector<std::size_t> counts(trials, 0);
  parallel_for(trials, 0, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const auto sketch = build_residual_sketch(ops, c, sample_prime(m, rng));
    std::size_t count = 0;
    for (double v : sketch.v) count += std::abs(v) >= c1;
    counts[t] = count;
  });
  return *std::max_element(counts.begin(), counts.end());
}

}  // namespace sparseconv
