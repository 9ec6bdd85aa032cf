#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparseconv/fft.hpp"
#include "sparseconv/numerics.hpp"

namespace sparseconv {

/// Folded convolution mass V and folded index-weighted mass W for one prime.
struct Sketch {
  std::uint64_t p = 0;
  std::vector<double> v;
  std::vector<double> w;
};

struct Candidate {
  std::size_t index = 0;
  double value = 0.0;  // negative only for residual sketches that overshoot
  std::size_t bucket = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Inputs of a sketch with their derivatives precomputed, so that repeated
/// sketches of the same pair do not recompute them.
class SketchOperands {
 public:
  /// Throws std::invalid_argument on length mismatch.
  SketchOperands(const DenseVector& a, const DenseVector& b);

  std::size_t n() const { return a_.size(); }
  std::size_t out_len() const { return 2 * a_.size() - 1; }
  const DenseVector& a() const { return a_; }
  const DenseVector& b() const { return b_; }
  const DenseVector& da() const { return da_; }
  const DenseVector& db() const { return db_; }

 private:
  DenseVector a_, b_, da_, db_;
};

/// V = fold(A) *_p fold(B), W = fold(dA) *_p fold(B) + fold(A) *_p fold(dB).
/// Costs two forward and one inverse transform of length >= 2p-1.
Sketch build_sketch(const SketchOperands& ops, std::uint64_t p,
                    FftCounter* counter = nullptr);
Sketch build_sketch(const DenseVector& a, const DenseVector& b,
                    std::uint64_t p, FftCounter* counter = nullptr);

/// build_sketch minus fold(C) from V and fold(dC) from W. Throws
/// std::out_of_range if an index of `prev` is >= 2n-1.
Sketch build_residual_sketch(const SketchOperands& ops,
                             const SparseResult& prev, std::uint64_t p,
                             FftCounter* counter = nullptr);
Sketch build_residual_sketch(const DenseVector& a, const DenseVector& b,
                             const SparseResult& prev, std::uint64_t p,
                             FftCounter* counter = nullptr);

/// Ratio trick: for every bucket with |V_i| >= c1, x = W_i / V_i is accepted as
/// (round(x), V_i) when it lies within tau of an integer in [0, out_len).
/// Results are in bucket order.
std::vector<Candidate> extract_candidates(const Sketch& s, double c1,
                                          double tau, std::size_t out_len);

}  // namespace sparseconv
