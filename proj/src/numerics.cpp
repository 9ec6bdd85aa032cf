#include "sparseconv/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparseconv {

DenseVector::DenseVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("DenseVector: empty vector");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = values_[i];
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("DenseVector: entry " + std::to_string(i) +
                                  " is negative or not finite");
  }
}

DenseVector DenseVector::zeros(std::size_t n) {
  return DenseVector(std::vector<double>(n, 0.0));
}

DenseVector derivative(const DenseVector& a, IndexBase base) {
  const auto offset = static_cast<double>(base);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = (static_cast<double>(i) + offset) * a[i];
  return DenseVector(std::move(out));
}

DenseVector naive_convolve(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("naive_convolve: length mismatch");
  const std::size_t n = a.size();
  std::vector<double> out(2 * n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return DenseVector(std::move(out));
}

std::size_t norm_ge(std::span<const double> a, double threshold) {
  std::size_t count = 0;
  for (double x : a) count += x >= threshold;
  return count;
}

std::size_t norm_le(std::span<const double> a, double threshold) {
  std::size_t count = 0;
  for (double x : a) count += x <= threshold;
  return count;
}

std::vector<std::size_t> support_ge(std::span<const double> a, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] >= threshold) out.push_back(i);
  return out;
}

std::int64_t round_to_int(double x) {
  // 2^62 keeps llround well inside int64.
  if (!std::isfinite(x) || std::abs(x) >= 0x1.0p62)
    throw std::domain_error("round_to_int: value not representable");
  return std::llround(x);
}

unsigned ceil_log2(std::uint64_t x) {
  unsigned bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < x) ++bits;
  return bits;
}

std::vector<std::size_t> support_of(const SparseResult& r) {
  std::vector<std::size_t> out;
  out.reserve(r.size());
  for (const auto& [index, value] : r) out.push_back(index);
  return out;
}

}  // namespace sparseconv
