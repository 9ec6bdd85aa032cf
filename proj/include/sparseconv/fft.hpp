#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparseconv/numerics.hpp"

namespace sparseconv {

using Complex = std::complex<double>;

/// Instrumented transform counter. `work` accumulates N * log2(N) per
/// transform of length N, the unit used to compare engines independently of
/// the machine.
struct FftCounter {
  std::atomic<std::uint64_t> work{0};
  std::atomic<std::uint64_t> transforms{0};

  void record(std::size_t length);
};

/// Power-of-two length complex workspace.
class ComplexBuffer {
 public:
  /// Throws std::invalid_argument unless length is a power of two.
  explicit ComplexBuffer(std::size_t length);

  std::size_t size() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<Complex> span() { return data_; }
  std::span<const Complex> span() const { return data_; }

  /// In-place iterative radix-2 transform. The inverse is scaled by 1/N.
  void forward(FftCounter* counter = nullptr);
  void inverse(FftCounter* counter = nullptr);

 private:
  std::vector<Complex> data_;
};

bool is_power_of_two(std::size_t x);
std::size_t next_power_of_two(std::size_t x);

/// Linear convolution of arbitrary real vectors (lengths may differ), length
/// |a| + |b| - 1. Both inputs share one forward transform.
std::vector<double> linear_convolve(std::span<const double> a,
                                    std::span<const double> b,
                                    FftCounter* counter = nullptr);

/// Dense FFT baseline: linear convolution of two equal-length non-negative
/// vectors, length 2n-1. Throws std::invalid_argument on length mismatch.
DenseVector fft_convolve(const DenseVector& a, const DenseVector& b,
                         FftCounter* counter = nullptr);

/// Cyclic convolution of two length-m vectors: the length 2m-1 linear
/// convolution with index i >= m folded onto i - m.
std::vector<double> cyclic_convolve(std::span<const double> a,
                                    std::span<const double> b, std::size_t m,
                                    FftCounter* counter = nullptr);

}  // namespace sparseconv
