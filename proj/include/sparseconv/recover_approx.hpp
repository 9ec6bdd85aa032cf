#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparseconv/numerics.hpp"

namespace sparseconv {

struct ApproxParams {
  std::size_t k = 1;            // significant-support budget
  double delta = 0.1;           // failure probability
  double c1 = 0.5;              // significance threshold
  double tau = 0.25;            // ratio-to-integer tolerance
  double m_mult = 4.0;          // m = m_mult * k * ceil(log2 n) * ceil(log2 k)
  double L_mult = 8.0;          // L = L_mult * log2(k / delta)
  double min_votes_frac = 0.5;  // votes needed to report an index, as a fraction of L
  std::uint64_t seed = 0;
  unsigned threads = 0;         // 0 = hardware concurrency; output does not depend on it

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct ApproxSchedule {
  std::uint64_t m = 0;
  std::size_t repetitions = 0;
  std::size_t min_votes = 0;
};

ApproxSchedule approx_schedule(std::size_t n, const ApproxParams& params);

/// Work accounting reported by the sparse engines.
struct RunStats {
  std::uint64_t fft_work = 0;
  std::uint64_t transforms = 0;
  std::size_t sketches = 0;
};

/// Lower median (element (|v|-1)/2 in sorted order). Throws on empty input.
double lower_median(std::vector<double> values);

/// L independent hash repetitions, pooled candidates, per-index median over
/// indices that gathered at least min_votes candidates. Deterministic in
/// (a, b, params).
SparseResult approx_sparse_convolve(const DenseVector& a, const DenseVector& b,
                                    const ApproxParams& params,
                                    RunStats* stats = nullptr);

}  // namespace sparseconv
