#include "sparseconv/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sparseconv/fft.hpp"
#include "sparseconv/parallel.hpp"
#include "sparseconv/random.hpp"

namespace sparseconv {
namespace {

using nlohmann::json;

constexpr std::size_t kCrossCheckLimit = std::size_t{1} << 10;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_ms(double ms) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, ms, std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

SparseResult threshold(const DenseVector& dense, double c1) {
  SparseResult out;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] >= c1) out.emplace_hint(out.end(), i, dense[i]);
  return out;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

ExactParams parse_params(const json& p) {
  check_keys(p, {"delta", "c1", "tau", "m_mult", "L_mult", "min_votes_frac", "m_mult_exact",
                 "R_mult", "level_base", "integer_mode"},
             "params");
  ExactParams out;
  read_opt(p, "delta", out.approx.delta);
  read_opt(p, "c1", out.approx.c1);
  read_opt(p, "tau", out.approx.tau);
  read_opt(p, "m_mult", out.approx.m_mult);
  read_opt(p, "L_mult", out.approx.L_mult);
  read_opt(p, "min_votes_frac", out.approx.min_votes_frac);
  read_opt(p, "m_mult_exact", out.m_mult_exact);
  read_opt(p, "R_mult", out.R_mult);
  read_opt(p, "level_base", out.level_base);
  read_opt(p, "integer_mode", out.integer_mode);
  return out;
}

NamedInstanceSpec parse_instance(const json& j, std::size_t position) {
  const std::string where = "instances[" + std::to_string(position) + "]";
  check_keys(j, {"name", "n", "sa", "sb", "vmin", "vmax", "integer_values", "c2",
                 "noise_density", "k"},
             where);
  NamedInstanceSpec out;
  out.name = j.value("name", "instance" + std::to_string(position));
  if (!j.contains("n") || !j.contains("sa") || !j.contains("sb"))
    throw ConfigError(where + ": n, sa and sb are required");
  auto& s = out.spec;
  s.n = j.at("n").get<std::size_t>();
  s.s_a = j.at("sa").get<std::size_t>();
  s.s_b = j.at("sb").get<std::size_t>();
  read_opt(j, "vmin", s.lo);
  read_opt(j, "vmax", s.hi);
  read_opt(j, "integer_values", s.integer_values);
  read_opt(j, "noise_density", s.noise_density);
  if (j.contains("c2") && !j["c2"].is_null()) s.c2 = j["c2"].get<double>();
  if (j.contains("k") && !j["k"].is_null()) s.k_budget = j["k"].get<std::size_t>();
  return out;
}

}  // namespace

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::Naive: return "naive";
    case Engine::Fft: return "fft";
    case Engine::Approx: return "approx";
    case Engine::Exact: return "exact";
  }
  return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name) {
  if (name == "naive") return Engine::Naive;
  if (name == "fft" || name == "dense-fft") return Engine::Fft;
  if (name == "approx") return Engine::Approx;
  if (name == "exact") return Engine::Exact;
  return std::nullopt;
}

EngineOutput run_engine(Engine engine, const DenseVector& a, const DenseVector& b,
                        const ExactParams& params) {
  EngineOutput out;
  const auto start = std::chrono::steady_clock::now();
  switch (engine) {
    case Engine::Naive:
      if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
      out.result = threshold(naive_convolve(a, b), params.approx.c1);
      break;
    case Engine::Fft: {
      FftCounter counter;
      out.result = threshold(fft_convolve(a, b, &counter), params.approx.c1);
      out.stats.fft_work = counter.work.load();
      out.stats.transforms = counter.transforms.load();
      break;
    }
    case Engine::Approx:
      out.result = approx_sparse_convolve(a, b, params.approx, &out.stats);
      break;
    case Engine::Exact:
      out.result = exact_sparse_convolve(a, b, params, &out.stats);
      break;
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start).count();
  return out;
}

Evaluation evaluate(const SparseResult& got, std::span<const double> oracle, double c1,
                    bool integer_exact, double value_tol) {
  Evaluation ev;
  const auto truth = support_ge(oracle, c1);
  std::size_t hits = 0;
  for (const auto& [index, value] : got)
    if (index < oracle.size() && oracle[index] >= c1) ++hits;
  ev.precision = got.empty() ? 1.0 : double(hits) / double(got.size());
  ev.recall = truth.empty() ? 1.0 : double(hits) / double(truth.size());

  bool values_ok = true;
  for (auto j : truth) {
    const auto it = got.find(j);
    const double have = it == got.end() ? 0.0 : it->second;
    const double err = std::abs(have - oracle[j]);
    ev.max_abs_err = std::max(ev.max_abs_err, err);
    if (integer_exact)
      values_ok = values_ok && have == static_cast<double>(round_to_int(oracle[j]));
    else
      values_ok = values_ok && err <= value_tol;
  }
  ev.exact_match = values_ok && hits == got.size() && hits == truth.size();
  return ev;
}

BenchmarkConfig BenchmarkConfig::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    check_keys(j, {"schema_version", "master_seed", "repetitions", "engines", "params",
                   "instances"},
               "config");
    if (j.contains("schema_version") && j["schema_version"].get<int>() != kReportSchemaVersion)
      throw ConfigError("unsupported schema_version");

    BenchmarkConfig cfg;
    read_opt(j, "master_seed", cfg.master_seed);
    read_opt(j, "repetitions", cfg.repetitions);
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (!j.contains("engines") || !j["engines"].is_array() || j["engines"].empty())
      throw ConfigError("engines must be a non-empty array");
    for (const auto& e : j["engines"]) {
      const auto engine = parse_engine(e.get<std::string>());
      if (!engine) throw ConfigError("unknown engine '" + e.get<std::string>() + "'");
      cfg.engines.push_back(*engine);
    }
    if (j.contains("params")) cfg.params = parse_params(j["params"]);
    if (!j.contains("instances") || !j["instances"].is_array() || j["instances"].empty())
      throw ConfigError("instances must be a non-empty array");
    for (std::size_t i = 0; i < j["instances"].size(); ++i)
      cfg.instances.push_back(parse_instance(j["instances"][i], i));

    auto probe = cfg.params;
    probe.approx.k = 1;
    try {
      probe.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("params: ") + e.what());
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

BenchmarkConfig BenchmarkConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config, unsigned jobs) {
  const std::size_t n_inst = config.instances.size();
  const std::size_t n_eng = config.engines.size();
  const std::size_t reps = config.repetitions;
  const unsigned workers = resolve_threads(jobs);

  BenchmarkResult result;
  result.rows.resize(n_inst * n_eng * reps);
  result.audits.resize(n_inst * reps);

  parallel_for(n_inst * reps, workers, [&](std::size_t unit) {
    const std::size_t s = unit / reps, r = unit % reps;
    const auto& named = config.instances[s];
    auto spec = named.spec;
    spec.seed = derive_seed(config.master_seed, s, r);

    auto& audit = result.audits[unit];
    audit.instance = named.name;
    audit.seed = spec.seed;

    auto row_at = [&](std::size_t e) -> RunReport& {
      return result.rows[(s * n_eng + e) * reps + r];
    };
    for (std::size_t e = 0; e < n_eng; ++e) {
      auto& row = row_at(e);
      row.instance = named.name;
      row.engine = config.engines[e];
      row.n = spec.n;
      row.k = spec.k_value();
      row.delta = config.params.approx.delta;
      row.seed = derive_seed(config.master_seed, s, static_cast<int>(config.engines[e]) + 1, r);
    }

    Instance inst;
    try {
      inst = generate_instance(spec);
    } catch (const std::exception& ex) {
      audit.error = ex.what();
      for (std::size_t e = 0; e < n_eng; ++e) row_at(e).error = "generation: " + audit.error;
      return;
    }
    audit.k_effective = inst.k_effective;

    const auto oracle = fft_convolve(inst.a, inst.b);
    const double c1 = config.params.approx.c1;
    if (spec.n <= kCrossCheckLimit) {
      const auto slow = naive_convolve(inst.a, inst.b);
      double diff = 0;
      for (std::size_t i = 0; i < slow.size(); ++i)
        diff = std::max(diff, std::abs(slow[i] - oracle[i]));
      audit.oracle_crosscheck = diff;
      audit.gap_ok = norm_ge(slow.values(), inst.c1_effective) == inst.k_effective &&
                     norm_le(slow.values(), inst.c2) == slow.size() - inst.k_effective;
    } else {
      // FFT round-off can exceed c2 at large n; check the band with slack.
      std::size_t low = 0;
      for (double x : oracle) low += x <= inst.c2 + 1e-8;
      audit.gap_ok = norm_ge(oracle.values(), c1) == inst.k_effective &&
                     low == oracle.size() - inst.k_effective;
    }

    for (std::size_t e = 0; e < n_eng; ++e) {
      auto& row = row_at(e);
      auto params = config.params;
      params.approx.k = row.k;
      params.approx.seed = row.seed;
      params.approx.threads = workers > 1 ? 1 : 0;
      try {
        const auto out = run_engine(row.engine, inst.a, inst.b, params);
        row.wall_ms = out.wall_ms;
        row.fft_work = out.stats.fft_work;
        row.eval = evaluate(out.result, oracle.values(), c1,
                            row.engine == Engine::Exact && params.integer_mode);
      } catch (const std::exception& ex) {
        row.error = ex.what();
      }
    }
  });
  return result;
}

void write_report_csv(std::ostream& out, const std::vector<RunReport>& rows) {
  out << "schema_version,engine,n,k,delta,seed,wall_ms,support_precision,support_recall,"
         "max_abs_err_on_support,exact_match\n";
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    const double nan = std::nan("");
    out << kReportSchemaVersion << ',' << engine_name(r.engine) << ',' << r.n << ',' << r.k
        << ',' << format_double(r.delta) << ',' << r.seed << ',' << format_ms(r.wall_ms) << ','
        << format_double(ok ? r.eval.precision : nan) << ','
        << format_double(ok ? r.eval.recall : nan) << ','
        << format_double(ok ? r.eval.max_abs_err : nan) << ','
        << (ok && r.eval.exact_match ? 1 : 0) << '\n';
  }
}

std::string summary_json(const BenchmarkConfig& config, const BenchmarkResult& result) {
  json groups = json::array();
  json failures = json::array();
  const std::size_t reps = config.repetitions;
  for (std::size_t start = 0; start < result.rows.size(); start += reps) {
    const auto& first = result.rows[start];
    std::size_t successes = 0, failed = 0;
    double wall = 0, work = 0, precision = 0, recall = 0, worst = 0;
    for (std::size_t r = start; r < start + reps; ++r) {
      const auto& row = result.rows[r];
      wall += row.wall_ms;
      if (!row.error.empty()) {
        ++failed;
        failures.push_back({{"instance", row.instance},
                            {"engine", engine_name(row.engine)},
                            {"seed", row.seed},
                            {"error", row.error}});
        continue;
      }
      successes += row.eval.exact_match;
      work += double(row.fft_work);
      precision += row.eval.precision;
      recall += row.eval.recall;
      worst = std::max(worst, row.eval.max_abs_err);
    }
    const double completed = double(reps - failed);
    groups.push_back({{"instance", first.instance},
                      {"engine", engine_name(first.engine)},
                      {"n", first.n},
                      {"k", first.k},
                      {"runs", reps},
                      {"failures", failed},
                      {"successes", successes},
                      {"success_rate", double(successes) / double(reps)},
                      {"mean_precision", completed > 0 ? precision / completed : 0.0},
                      {"mean_recall", completed > 0 ? recall / completed : 0.0},
                      {"max_abs_err_on_support", worst},
                      {"mean_fft_work", completed > 0 ? work / completed : 0.0},
                      {"mean_wall_ms", wall / double(reps)}});
  }

  json audits = json::array();
  for (const auto& a : result.audits) {
    json entry = {{"instance", a.instance},
                  {"seed", a.seed},
                  {"k_effective", a.k_effective},
                  {"gap_ok", a.gap_ok}};
    entry["oracle_crosscheck_max_abs_diff"] =
        a.oracle_crosscheck ? json(*a.oracle_crosscheck) : json(nullptr);
    if (!a.error.empty()) entry["error"] = a.error;
    audits.push_back(std::move(entry));
  }

  json summary = {{"schema_version", kReportSchemaVersion},
                  {"master_seed", config.master_seed},
                  {"repetitions", config.repetitions},
                  {"nondeterministic_fields", {"mean_wall_ms"}},
                  {"groups", std::move(groups)},
                  {"audits", std::move(audits)},
                  {"failures", std::move(failures)}};
  return summary.dump(2) + "\n";
}

BenchmarkResult run_benchmark_to_dir(const std::filesystem::path& config_path,
                                     const std::filesystem::path& out_dir, unsigned jobs) {
  const auto config = BenchmarkConfig::load(config_path);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  auto result = run_benchmark(config, jobs);

  std::ofstream csv(out_dir / "runs.csv");
  std::ofstream summary(out_dir / "summary.json");
  if (!csv || !summary) throw IoError("cannot write reports into " + out_dir.string());
  write_report_csv(csv, result.rows);
  summary << summary_json(config, result);
  if (!csv.flush() || !summary.flush()) throw IoError("report write failed");
  return result;
}

}  // namespace sparseconv
