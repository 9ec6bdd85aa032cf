#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparseconv/numerics.hpp"
#include "sparseconv/recover_approx.hpp"

namespace sparseconv {

struct ExactParams {
  ApproxParams approx;          // k, delta, c1, tau, seed and the bootstrap run
  double m_mult_exact = 8.0;    // m = m_mult_exact * k * ceil(log2 n) * ceil(log2 k)^2
  double R_mult = 2.0;          // R_l = R_mult * log2(2L / delta) / level_base^(l-1)
  double level_base = 1.5;
  bool integer_mode = true;     // round recovered values to integers

  void validate() const;
};

struct ExactSchedule {
  std::uint64_t m = 0;
  std::size_t levels = 0;
  std::vector<std::size_t> repetitions;  // R_1 .. R_L

  std::size_t total_repetitions() const;
};

ExactSchedule exact_schedule(std::size_t n, const ExactParams& params);

/// Snapshots of the reconstruction: levels[0] is the bootstrap, levels[l] the
/// state after correction level l.
struct ExactTrace {
  std::vector<SparseResult> levels;
  std::vector<std::uint64_t> chosen_primes;
};

/// Bootstrap with the approximate engine at failure budget delta/2, then
/// iteratively correct against residual sketches.
SparseResult exact_sparse_convolve(const DenseVector& a, const DenseVector& b,
                                   const ExactParams& params,
                                   RunStats* stats = nullptr,
                                   ExactTrace* trace = nullptr);

/// Runs correction levels 1..min(level_count, schedule.levels) starting from
/// `start`. exact_sparse_convolve is the bootstrap followed by this.
SparseResult run_correction_levels(const DenseVector& a, const DenseVector& b,
                                   SparseResult start,
                                   const ExactParams& params,
                                   std::size_t level_count,
                                   RunStats* stats = nullptr,
                                   ExactTrace* trace = nullptr);

/// Diagnostic upper estimate of ||A*B - C||_{>=c1}: the largest count of
/// residual buckets with |V_i| >= c1 over `trials` primes sampled from
/// [m, 2m]. Not used by the recovery path.
std::size_t residual_norm(const DenseVector& a, const DenseVector& b,
                          const SparseResult& c, double c1, std::uint64_t m,
                          std::size_t trials, std::uint64_t seed);

}  // namespace sparseconv
