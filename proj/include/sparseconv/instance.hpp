#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sparseconv/numerics.hpp"

namespace sparseconv {

class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SparseEntry {
  std::size_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Noise is not stored in instance files; it is regenerated from this.
struct NoiseDescriptor {
  double eta = 0.0;      // per-entry noise ceiling on A and B
  double density = 0.0;  // fraction of non-significant positions that get noise
  std::uint64_t seed = 0;

  friend bool operator==(const NoiseDescriptor&, const NoiseDescriptor&) = default;
};

struct InstanceSpec {
  std::size_t n = 0;
  std::size_t s_a = 0;
  std::size_t s_b = 0;
  double lo = 1.0;
  double hi = 10.0;
  bool integer_values = true;
  std::optional<double> c2;           // default 1 / (n^2 ceil(log2 n))
  double noise_density = 1.0;
  std::optional<std::size_t> k_budget;  // default s_a * s_b
  std::uint64_t seed = 0;

  double c2_value() const;
  std::size_t k_value() const;
};

/// A generated (or loaded) pair of inputs with a gap between significant
/// output entries (>= c1_effective) and noise entries (<= c2).
struct Instance {
  std::size_t n = 0;
  std::vector<SparseEntry> a_significant;
  std::vector<SparseEntry> b_significant;
  NoiseDescriptor noise;

  DenseVector a;
  DenseVector b;
  SparseResult significant_product;  // exact product of the significant parts
  std::size_t k_effective = 0;
  double c1_effective = 0.0;
  double c2 = 0.0;
};

/// Throws InfeasibleInstance when the spec cannot satisfy the gap or the k
/// budget, std::invalid_argument on malformed specs.
Instance generate_instance(const InstanceSpec& spec);

/// Rebuilds the dense vectors and derived quantities from the stored parts.
Instance assemble_instance(std::size_t n, std::vector<SparseEntry> a_significant,
                           std::vector<SparseEntry> b_significant,
                           NoiseDescriptor noise);

void write_instance(std::ostream& out, const Instance& inst);
/// Throws FormatError.
Instance read_instance(std::istream& in);

void save_instance(const std::filesystem::path& path, const Instance& inst);
Instance load_instance(const std::filesystem::path& path);

/// Reads one input vector: from an instance file (`which` is 'A' or 'B') or
/// from a plain text file of whitespace-separated non-negative numbers.
DenseVector load_vector(const std::filesystem::path& path, char which);

}  // namespace sparseconv
