#include "sparseconv/recover_approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparseconv/fft.hpp"
#include "sparseconv/mod_hash.hpp"
#include "sparseconv/parallel.hpp"
#include "sparseconv/random.hpp"
#include "sparseconv/sketch.hpp"

namespace sparseconv {

void ApproxParams::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  if (!(tau > 0.0 && tau < 0.5)) throw std::invalid_argument("tau must be in (0, 0.5)");
  if (!(m_mult >= 4.0)) throw std::invalid_argument("m_mult must be >= 4");
  if (!(L_mult >= 1.0)) throw std::invalid_argument("L_mult must be >= 1");
  if (!(min_votes_frac > 0.0 && min_votes_frac <= 1.0))
    throw std::invalid_argument("min_votes_frac must be in (0, 1]");
}

ApproxSchedule approx_schedule(std::size_t n, const ApproxParams& params) {
  const double log_k = std::max(ceil_log2(params.k), 1u);
  const double m = std::ceil(params.m_mult * double(params.k) * ceil_log2(n) * log_k);
  ApproxSchedule s;
  s.m = std::max<std::uint64_t>(static_cast<std::uint64_t>(m), 16);
  const double reps = std::ceil(params.L_mult * std::log2(double(params.k) / params.delta));
  s.repetitions = std::max<std::size_t>(static_cast<std::size_t>(std::max(reps, 0.0)), 3);
  s.min_votes = static_cast<std::size_t>(
      std::ceil(params.min_votes_frac * double(s.repetitions)));
  return s;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("lower_median: empty multiset");
  const auto mid = values.begin() + (values.size() - 1) / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

SparseResult approx_sparse_convolve(const DenseVector& a, const DenseVector& b,
                                    const ApproxParams& params,
                                    RunStats* stats) {
  params.validate();
  const SketchOperands ops(a, b);
  const auto sched = approx_schedule(ops.n(), params);

  FftCounter counter;
  std::vector<std::vector<Candidate>> found(sched.repetitions);
  parallel_for(sched.repetitions, params.threads, [&](std::size_t l) {
    Rng rng(derive_seed(params.seed, l + 1));
    const auto p = sample_prime(sched.m, rng);
    found[l] = extract_candidates(build_sketch(ops, p, &counter), params.c1,
                                  params.tau, ops.out_len());
  });

  std::map<std::size_t, std::vector<double>> votes;
  for (const auto& list : found)
    for (const auto& c : list) votes[c.index].push_back(c.value);

  SparseResult out;
  for (auto& [index, values] : votes)
    if (values.size() >= sched.min_votes) out[index] = lower_median(std::move(values));

  if (stats) {
    stats->fft_work += counter.work.load();
    stats->transforms += counter.transforms.load();
    stats->sketches += sched.repetitions;
  }
  return out;
}

}  // namespace sparseconv
