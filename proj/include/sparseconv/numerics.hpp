#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace sparseconv {

/// Non-negative real vector of fixed length n >= 1.
class DenseVector {
 public:
  DenseVector() = default;
  /// Throws std::invalid_argument on an empty vector or a negative/non-finite
  /// entry.
  explicit DenseVector(std::vector<double> values);

  static DenseVector zeros(std::size_t n);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

/// Sparse output of the recovery algorithms: index in [0, 2n-1) -> value.
using SparseResult = std::map<std::size_t, double>;

enum class IndexBase { Zero = 0, One = 1 };

/// Index-weighted vector, entry i = (i + base) * a_i. Base zero is what the
/// algorithms use; base one matches the 1-based textbook presentation.
DenseVector derivative(const DenseVector& a, IndexBase base = IndexBase::Zero);

/// Schoolbook O(n^2) linear convolution, length 2n-1. Oracle for every other
/// convolution path.
DenseVector naive_convolve(const DenseVector& a, const DenseVector& b);

std::size_t norm_ge(std::span<const double> a, double threshold);
std::size_t norm_le(std::span<const double> a, double threshold);
std::vector<std::size_t> support_ge(std::span<const double> a, double threshold);

/// Nearest integer, halves away from zero. Throws std::domain_error on
/// non-finite or out-of-range input.
std::int64_t round_to_int(double x);

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
unsigned ceil_log2(std::uint64_t x);

/// Keys of a sparse result, ascending.
std::vector<std::size_t> support_of(const SparseResult& r);

}  // namespace sparseconv
