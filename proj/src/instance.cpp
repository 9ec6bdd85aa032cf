#include "sparseconv/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "sparseconv/random.hpp"

namespace sparseconv {
namespace {

constexpr std::string_view kMagic = "sparseconv-instance v1";
constexpr int kMaxAttempts = 10;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

// Positions drawn without replacement, values uniform in [lo, hi] (integers
// when requested).
std::vector<SparseEntry> draw_significant(Rng& rng, std::size_t n, std::size_t count,
                                          const InstanceSpec& spec) {
  std::set<std::size_t> used;
  std::vector<SparseEntry> out;
  const auto ilo = static_cast<std::uint64_t>(std::ceil(spec.lo));
  const auto ihi = static_cast<std::uint64_t>(std::floor(spec.hi));
  while (out.size() < count) {
    const auto pos = static_cast<std::size_t>(uniform_below(rng, n));
    if (!used.insert(pos).second) continue;
    const double value = spec.integer_values
                             ? static_cast<double>(ilo + uniform_below(rng, ihi - ilo + 1))
                             : spec.lo + (spec.hi - spec.lo) * uniform_unit(rng);
    out.push_back({pos, value});
  }
  std::sort(out.begin(), out.end(),
            [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
  return out;
}

std::vector<double> with_noise(std::size_t n, const std::vector<SparseEntry>& sig,
                               const NoiseDescriptor& noise, Rng& rng) {
  std::vector<double> v(n, 0.0);
  std::vector<bool> is_sig(n, false);
  for (const auto& e : sig) {
    v[e.index] = e.value;
    is_sig[e.index] = true;
  }
  // Two draws per position regardless of outcome keeps the stream aligned.
  for (std::size_t j = 0; j < n; ++j) {
    const double gate = uniform_unit(rng);
    const double level = uniform_unit(rng);
    if (!is_sig[j] && gate < noise.density) v[j] = level * noise.eta;
  }
  return v;
}

void check_entries(std::size_t n, const std::vector<SparseEntry>& entries, char which) {
  std::set<std::size_t> seen;
  for (const auto& e : entries) {
    if (e.index >= n || !seen.insert(e.index).second)
      throw FormatError(std::string("section ") + which + ": index " +
                        std::to_string(e.index) + " out of range or repeated");
    if (!std::isfinite(e.value) || e.value <= 0.0)
      throw FormatError(std::string("section ") + which +
                        ": significant values must be positive");
  }
}

}  // namespace

double InstanceSpec::c2_value() const {
  if (c2) return *c2;
  const double nn = static_cast<double>(n);
  return 1.0 / (nn * nn * std::max(1u, ceil_log2(n)));
}

std::size_t InstanceSpec::k_value() const { return k_budget.value_or(s_a * s_b); }

Instance assemble_instance(std::size_t n, std::vector<SparseEntry> a_significant,
                           std::vector<SparseEntry> b_significant,
                           NoiseDescriptor noise) {
  if (n < 1) throw FormatError("instance length must be >= 1");
  check_entries(n, a_significant, 'A');
  check_entries(n, b_significant, 'B');
  if (!(noise.eta >= 0.0) || !(noise.density >= 0.0 && noise.density <= 1.0))
    throw FormatError("noise descriptor out of range");

  Instance inst;
  inst.n = n;
  inst.noise = noise;
  Rng rng(noise.seed);
  inst.a = DenseVector(with_noise(n, a_significant, noise, rng));
  inst.b = DenseVector(with_noise(n, b_significant, noise, rng));

  double v_min = INFINITY, v_max = 0.0;
  for (const auto* side : {&a_significant, &b_significant})
    for (const auto& e : *side) {
      v_min = std::min(v_min, e.value);
      v_max = std::max(v_max, e.value);
    }
  for (const auto& x : a_significant)
    for (const auto& y : b_significant) inst.significant_product[x.index + y.index] += x.value * y.value;

  inst.k_effective = inst.significant_product.size();
  inst.c1_effective = std::isfinite(v_min) ? std::min(v_min, v_min * v_min) : 1.0;
  inst.c2 = noise.eta * (2.0 * double(a_significant.size() + b_significant.size()) * v_max +
                         2.0 * double(n));
  inst.a_significant = std::move(a_significant);
  inst.b_significant = std::move(b_significant);
  return inst;
}

Instance generate_instance(const InstanceSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("instance: n must be >= 2");
  if (spec.s_a < 1 || spec.s_b < 1 || spec.s_a > spec.n || spec.s_b > spec.n)
    throw std::invalid_argument("instance: significant counts must be in [1, n]");
  if (!(spec.lo > 0.0) || !(spec.hi >= spec.lo))
    throw std::invalid_argument("instance: need 0 < lo <= hi");
  if (spec.integer_values && std::ceil(spec.lo) > std::floor(spec.hi))
    throw std::invalid_argument("instance: no integer in [lo, hi]");
  if (!(spec.noise_density >= 0.0 && spec.noise_density <= 1.0))
    throw std::invalid_argument("instance: noise density must be in [0, 1]");
  const double c2 = spec.c2_value();
  if (!(c2 > 0.0)) throw std::invalid_argument("instance: c2 must be positive");

  const std::size_t k = spec.k_value();
  if (spec.s_a * spec.s_b > k)
    throw InfeasibleInstance("s_a * s_b = " + std::to_string(spec.s_a * spec.s_b) +
                             " exceeds the k budget " + std::to_string(k));
  const double c1 = std::min(spec.lo, spec.lo * spec.lo);
  const double n = static_cast<double>(spec.n);
  if (!(c2 * (double(spec.s_a + spec.s_b) * spec.hi + n * c2) < c1 / 2.0) || !(c2 < c1))
    throw InfeasibleInstance("noise ceiling c2 leaves no gap below c1 = " + format_double(c1));

  NoiseDescriptor noise;
  noise.eta = c2 / (2.0 * double(spec.s_a + spec.s_b) * spec.hi + 2.0 * n);
  noise.density = spec.noise_density;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(derive_seed(spec.seed, attempt));
    auto a_sig = draw_significant(rng, spec.n, spec.s_a, spec);
    auto b_sig = draw_significant(rng, spec.n, spec.s_b, spec);
    noise.seed = derive_seed(spec.seed, attempt, 0x4E);
    Instance inst = assemble_instance(spec.n, std::move(a_sig), std::move(b_sig), noise);
    inst.c2 = c2;

    const bool gap_ok = std::all_of(
        inst.significant_product.begin(), inst.significant_product.end(),
        [&](const auto& e) { return e.second >= inst.c1_effective && e.second > c2; });
    if (gap_ok && inst.k_effective <= k) return inst;
  }
  throw InfeasibleInstance("gap band violated after " + std::to_string(kMaxAttempts) +
                           " attempts");
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << kMagic << '\n' << "n=" << inst.n << '\n';
  for (const auto& [name, entries] :
       {std::pair{'A', &inst.a_significant}, std::pair{'B', &inst.b_significant}}) {
    out << name << ' ' << entries->size() << '\n';
    for (const auto& e : *entries) out << e.index << ' ' << format_double(e.value) << '\n';
  }
  out << "noise eta=" << format_double(inst.noise.eta)
      << " density=" << format_double(inst.noise.density) << " seed=" << inst.noise.seed
      << '\n';
}

Instance read_instance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string_view {
    if (!std::getline(in, line))
      throw FormatError("instance: unexpected end of file after line " + std::to_string(line_no));
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError("instance line " + std::to_string(line_no) + ": " + what);
  };

  if (next() != kMagic) throw fail("expected '" + std::string(kMagic) + "'");
  std::size_t n = 0;
  {
    const auto l = next();
    if (!l.starts_with("n=") || !parse_number(l.substr(2), n)) throw fail("expected n=<int>");
  }

  auto read_section = [&](char name) {
    const auto header = next();
    std::size_t count = 0;
    if (header.size() < 3 || header[0] != name || header[1] != ' ' ||
        !parse_number(header.substr(2), count))
      throw fail(std::string("expected section header '") + name + " <count>'");
    std::vector<SparseEntry> entries;
    for (std::size_t i = 0; i < count; ++i) {
      const auto l = next();
      const auto space = l.find(' ');
      SparseEntry e;
      if (space == std::string_view::npos || !parse_number(l.substr(0, space), e.index) ||
          !parse_number(l.substr(space + 1), e.value))
        throw fail("expected '<index> <value>'");
      entries.push_back(e);
    }
    return entries;
  };
  auto a_sig = read_section('A');
  auto b_sig = read_section('B');

  NoiseDescriptor noise;
  {
    std::istringstream fields{std::string(next())};
    std::string word, eta, density, seed;
    if (!(fields >> word >> eta >> density >> seed) || word != "noise" ||
        !eta.starts_with("eta=") || !density.starts_with("density=") ||
        !seed.starts_with("seed=") ||
        !parse_number(std::string_view(eta).substr(4), noise.eta) ||
        !parse_number(std::string_view(density).substr(8), noise.density) ||
        !parse_number(std::string_view(seed).substr(5), noise.seed))
      throw fail("expected 'noise eta=<float> density=<float> seed=<int>'");
  }
  return assemble_instance(n, std::move(a_sig), std::move(b_sig), noise);
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_instance(out, inst);
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_instance(in);
}

DenseVector load_vector(const std::filesystem::path& path, char which) {
  if (which != 'A' && which != 'B')
    throw std::invalid_argument("load_vector: section must be 'A' or 'B'");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  in.clear();
  in.seekg(0);
  if (first == kMagic) {
    auto inst = read_instance(in);
    return which == 'A' ? std::move(inst.a) : std::move(inst.b);
  }

  std::vector<double> values;
  std::string token;
  while (in >> token) {
    double x = 0;
    if (!parse_number(std::string_view(token), x))
      throw FormatError(path.string() + ": not a number: '" + token + "'");
    values.push_back(x);
  }
  try {
    return DenseVector(std::move(values));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace sparseconv
