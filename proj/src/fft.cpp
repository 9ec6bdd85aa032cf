#include "sparseconv/fft.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sparseconv {
namespace {

// roots[h + j] = exp(-i pi j / h) for every power of two h < size and j < h.
// A table of size N serves every transform of length <= N.
class RootTable {
 public:
  std::shared_ptr<const std::vector<Complex>> get(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (!table_ || table_->size() < n) {
      auto fresh = std::make_shared<std::vector<Complex>>(std::max<std::size_t>(n, 2));
      for (std::size_t h = 1; h < fresh->size(); h <<= 1)
        for (std::size_t j = 0; j < h; ++j)
          (*fresh)[h + j] = std::polar(1.0, -std::numbers::pi * double(j) / double(h));
      table_ = std::move(fresh);
    }
    return table_;
  }

 private:
  std::mutex mutex_;
  std::shared_ptr<const std::vector<Complex>> table_;
};

RootTable& roots() {
  static RootTable table;
  return table;
}

template <bool Inverse>
void transform(std::span<Complex> data) {
  const std::size_t n = data.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const auto table = roots().get(n);
  const double* w = reinterpret_cast<const double*>(table->data());
  double* a = reinterpret_cast<double*>(data.data());
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t base = 0; base < n; base += 2 * h) {
      double* lo = a + 2 * base;
      double* hi = a + 2 * (base + h);
      const double* wh = w + 2 * h;
      for (std::size_t j = 0; j < h; ++j) {
        const double wr = wh[2 * j];
        const double wi = Inverse ? -wh[2 * j + 1] : wh[2 * j + 1];
        const double xr = hi[2 * j], xi = hi[2 * j + 1];
        const double tr = xr * wr - xi * wi;
        const double ti = xr * wi + xi * wr;
        const double ur = lo[2 * j], ui = lo[2 * j + 1];
        lo[2 * j] = ur + tr;
        lo[2 * j + 1] = ui + ti;
        hi[2 * j] = ur - tr;
        hi[2 * j + 1] = ui - ti;
      }
    }
  }

  if constexpr (Inverse) {
    const double scale = 1.0 / double(n);
    for (auto& x : data) x *= scale;
  }
}

// Power of two s with max|x| * s in [0.5, 1), or 0 for an all-zero input.
double normalizer(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  int exponent = 0;
  std::frexp(peak, &exponent);
  return std::ldexp(1.0, -exponent);
}

}  // namespace

void FftCounter::record(std::size_t length) {
  transforms.fetch_add(1, std::memory_order_relaxed);
  unsigned log = 0;
  while ((std::size_t{1} << log) < length) ++log;
  work.fetch_add(std::uint64_t(length) * log, std::memory_order_relaxed);
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t next_power_of_two(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

ComplexBuffer::ComplexBuffer(std::size_t length) {
  if (!is_power_of_two(length))
    throw std::invalid_argument("ComplexBuffer: length must be a power of two");
  data_.assign(length, Complex{});
}

void ComplexBuffer::forward(FftCounter* counter) {
  transform<false>(data_);
  if (counter) counter->record(data_.size());
}

void ComplexBuffer::inverse(FftCounter* counter) {
  transform<true>(data_);
  if (counter) counter->record(data_.size());
}

std::vector<double> linear_convolve(std::span<const double> a,
                                    std::span<const double> b,
                                    FftCounter* counter) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const double sa = normalizer(a);
  const double sb = normalizer(b);
  if (sa == 0.0 || sb == 0.0) return std::vector<double>(out_len, 0.0);

  // Pack a + ib, transform once, and separate the two spectra by symmetry.
  ComplexBuffer buf(next_power_of_two(out_len));
  for (std::size_t i = 0; i < a.size(); ++i) buf[i].real(a[i] * sa);
  for (std::size_t i = 0; i < b.size(); ++i) buf[i].imag(b[i] * sb);
  buf.forward(counter);

  const std::size_t n = buf.size();
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const std::size_t nk = (n - k) & (n - 1);
    const Complex x = buf[k];
    const Complex y = std::conj(buf[nk]);
    const Complex fa = 0.5 * (x + y);
    const Complex fb = Complex(0.0, -0.5) * (x - y);
    const Complex prod = fa * fb;
    buf[k] = prod;
    buf[nk] = std::conj(prod);
  }
  buf.inverse(counter);

  const double unscale = 1.0 / (sa * sb);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = buf[i].real() * unscale;
  return out;
}

DenseVector fft_convolve(const DenseVector& a, const DenseVector& b,
                         FftCounter* counter) {
  if (a.size() != b.size())
    throw std::invalid_argument("fft_convolve: length mismatch");
  auto out = linear_convolve(a.values(), b.values(), counter);
  // Non-negative inputs: anything below zero is round-off.
  for (double& x : out) x = std::max(x, 0.0);
  return DenseVector(std::move(out));
}

std::vector<double> cyclic_convolve(std::span<const double> a,
                                    std::span<const double> b, std::size_t m,
                                    FftCounter* counter) {
  if (m == 0 || a.size() != m || b.size() != m)
    throw std::invalid_argument("cyclic_convolve: both inputs must have length m");
  const auto lin = linear_convolve(a, b, counter);
  std::vector<double> out(lin.begin(), lin.begin() + m);
  for (std::size_t i = m; i < lin.size(); ++i) out[i - m] += lin[i];
  return out;
}

}  // namespace sparseconv
