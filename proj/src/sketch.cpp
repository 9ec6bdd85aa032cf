#include "sparseconv/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sparseconv/mod_hash.hpp"

namespace sparseconv {
namespace {

// Power of two s with max|x| * s in [0.5, 1); 1 for an all-zero input.
double normalizer(const std::vector<double>& x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 1.0;
  int exponent = 0;
  std::frexp(peak, &exponent);
  return std::ldexp(1.0, -exponent);
}

}  // namespace

SketchOperands::SketchOperands(const DenseVector& a, const DenseVector& b)
    : a_(a), b_(b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sketch: input length mismatch");
  da_ = derivative(a_);
  db_ = derivative(b_);
}

Sketch build_sketch(const SketchOperands& ops, std::uint64_t p,
                    FftCounter* counter) {
  if (p == 0) throw std::invalid_argument("build_sketch: p must be >= 1");
  const auto fa = fold(ops.a().values(), p);
  const auto fda = fold(ops.da().values(), p);
  const auto fb = fold(ops.b().values(), p);
  const auto fdb = fold(ops.db().values(), p);
  const double sa = normalizer(fa), sda = normalizer(fda);
  const double sb = normalizer(fb), sdb = normalizer(fdb);

  // Folded operands are zero past min(p, n), so the linear product is only
  // 2 min(p, n) - 1 long before it wraps.
  const std::size_t used = std::min<std::size_t>(p, ops.n());
  const std::size_t lin_len = 2 * used - 1;

  // Each operand pair shares one forward transform: x = fA + i fdA,
  // y = fB + i fdB, each part normalized to unit scale.
  ComplexBuffer x(next_power_of_two(lin_len));
  ComplexBuffer y(x.size());
  for (std::size_t i = 0; i < used; ++i) {
    x[i] = {fa[i] * sa, fda[i] * sda};
    y[i] = {fb[i] * sb, fdb[i] * sdb};
  }
  x.forward(counter);
  y.forward(counter);

  // V and W are both real, so one inverse of F(V) + i ws F(W) yields V + i ws W.
  // ws brings W (at most out_len times V per bucket) down to V's scale.
  const double ws = std::ldexp(1.0, -static_cast<int>(ceil_log2(ops.out_len())));
  const std::size_t n = x.size();
  const Complex half_i(0.0, -0.5);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const std::size_t nk = (n - k) & (n - 1);
    const Complex xk = x[k], xn = std::conj(x[nk]);
    const Complex yk = y[k], yn = std::conj(y[nk]);
    const Complex spec_a = 0.5 * (xk + xn) / sa;
    const Complex spec_da = half_i * (xk - xn) / sda;
    const Complex spec_b = 0.5 * (yk + yn) / sb;
    const Complex spec_db = half_i * (yk - yn) / sdb;
    const Complex sv = spec_a * spec_b;
    const Complex sw = (spec_da * spec_b + spec_a * spec_db) * ws;
    x[k] = sv + Complex(0.0, 1.0) * sw;
    x[nk] = std::conj(sv) + Complex(0.0, 1.0) * std::conj(sw);
  }
  x.inverse(counter);

  Sketch s{p, std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
  const double unscale_w = 1.0 / ws;
  for (std::size_t i = 0; i < lin_len; ++i) {
    const std::size_t bucket = i < p ? i : i - p;
    s.v[bucket] += x[i].real();
    s.w[bucket] += x[i].imag() * unscale_w;
  }
  return s;
}

Sketch build_sketch(const DenseVector& a, const DenseVector& b,
                    std::uint64_t p, FftCounter* counter) {
  return build_sketch(SketchOperands(a, b), p, counter);
}

Sketch build_residual_sketch(const SketchOperands& ops,
                             const SparseResult& prev, std::uint64_t p,
                             FftCounter* counter) {
  for (const auto& [index, value] : prev)
    if (index >= ops.out_len())
      throw std::out_of_range("build_residual_sketch: index " +
                              std::to_string(index) + " outside the output");
  Sketch s = build_sketch(ops, p, counter);
  for (const auto& [index, value] : prev) {
    const std::size_t bucket = index % p;
    s.v[bucket] -= value;
    s.w[bucket] -= static_cast<double>(index) * value;
  }
  return s;
}

Sketch build_residual_sketch(const DenseVector& a, const DenseVector& b,
                             const SparseResult& prev, std::uint64_t p,
                             FftCounter* counter) {
  return build_residual_sketch(SketchOperands(a, b), prev, p, counter);
}

std::vector<Candidate> extract_candidates(const Sketch& s, double c1,
                                          double tau, std::size_t out_len) {
  std::vector<Candidate> out;
  const double upper = static_cast<double>(out_len) - 1.0 + tau;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    const double mass = s.v[i];
    // |V_i| rather than V_i: a residual bucket can carry negative mass when
    // the previous reconstruction overshoots, and that mass must be removable.
    if (!(std::abs(mass) >= c1)) continue;
    const double x = s.w[i] / mass;
    if (!(x >= -tau && x <= upper)) continue;
    const auto index = round_to_int(x);
    if (std::abs(x - static_cast<double>(index)) > tau) continue;
    if (index < 0 || static_cast<std::size_t>(index) >= out_len) continue;
    out.push_back({static_cast<std::size_t>(index), mass, i});
  }
  return out;
}

}  // namespace sparseconv
