#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sparseconv/instance.hpp"
#include "sparseconv/numerics.hpp"
#include "sparseconv/recover_approx.hpp"
#include "sparseconv/recover_exact.hpp"

namespace sparseconv {

inline constexpr int kReportSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Engine { Naive, Fft, Approx, Exact };

std::string_view engine_name(Engine e);
/// Accepts naive, fft, dense-fft, approx, exact.
std::optional<Engine> parse_engine(std::string_view name);

struct EngineOutput {
  SparseResult result;
  RunStats stats;
  double wall_ms = 0.0;
};

/// Runs one engine. The dense engines report their output thresholded at
/// params.approx.c1.
EngineOutput run_engine(Engine engine, const DenseVector& a,
                        const DenseVector& b, const ExactParams& params);

struct Evaluation {
  double precision = 1.0;
  double recall = 1.0;
  double max_abs_err = 0.0;
  bool exact_match = false;
};

/// Scores `got` against the dense oracle on supp_{>=c1}(oracle). With
/// integer_exact, a match requires got_j == round(oracle_j); otherwise
/// |got_j - oracle_j| <= value_tol.
Evaluation evaluate(const SparseResult& got, std::span<const double> oracle,
                    double c1, bool integer_exact, double value_tol = 0.01);

struct NamedInstanceSpec {
  std::string name;
  InstanceSpec spec;
};

struct BenchmarkConfig {
  std::uint64_t master_seed = 0;
  std::size_t repetitions = 1;
  std::vector<Engine> engines;
  ExactParams params;  // k comes from each instance spec
  std::vector<NamedInstanceSpec> instances;

  /// Throws ConfigError.
  static BenchmarkConfig from_json(std::string_view text);
  static BenchmarkConfig load(const std::filesystem::path& path);
};

struct RunReport {
  std::string instance;
  Engine engine = Engine::Naive;
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;  // not reproducible
  Evaluation eval;
  std::uint64_t fft_work = 0;
  std::string error;     // empty on success
};

struct InstanceAudit {
  std::string instance;
  std::uint64_t seed = 0;
  std::size_t k_effective = 0;
  bool gap_ok = false;
  std::optional<double> oracle_crosscheck;  // naive vs fft, n <= 2^10
  std::string error;
};

struct BenchmarkResult {
  std::vector<RunReport> rows;  // instance-major, then engine, then repetition
  std::vector<InstanceAudit> audits;
};

BenchmarkResult run_benchmark(const BenchmarkConfig& config, unsigned jobs);

void write_report_csv(std::ostream& out, const std::vector<RunReport>& rows);
/// Aggregate per (instance, engine): success rate, mean timings, failures.
std::string summary_json(const BenchmarkConfig& config,
                         const BenchmarkResult& result);

/// Loads the config, runs it and writes runs.csv and summary.json into
/// out_dir (created if missing).
BenchmarkResult run_benchmark_to_dir(const std::filesystem::path& config_path,
                                     const std::filesystem::path& out_dir,
                                     unsigned jobs);

}  // namespace sparseconv
