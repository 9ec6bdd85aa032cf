// Acceptance suite. `acceptance --criterion N` runs one criterion; with no
// arguments all of them run. Each prints a single PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sparseconv/benchmark.hpp"
#include "sparseconv/fft.hpp"
#include "sparseconv/instance.hpp"
#include "sparseconv/mod_hash.hpp"
#include "sparseconv/numerics.hpp"
#include "sparseconv/parallel.hpp"
#include "sparseconv/random.hpp"
#include "sparseconv/recover_approx.hpp"
#include "sparseconv/recover_exact.hpp"

using namespace sparseconv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double max_diff(const DenseVector& got, const std::vector<double>& want) {
  return testing::max_abs_diff(got.vector(), want);
}

// The end-to-end grid shared by criteria 6-8: n = 2^14, 8 x 8 significant
// entries with integer values in [1, 10], default noise, k = 64, delta = 0.1.
constexpr std::size_t kGridN = 1 << 14;
constexpr std::size_t kGridK = 64;
constexpr double kGridDelta = 0.1;
constexpr std::size_t kGridSeeds = 100;

Instance grid_instance(std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = kGridN;
  spec.s_a = 8;
  spec.s_b = 8;
  spec.lo = 1;
  spec.hi = 10;
  spec.k_budget = kGridK;
  spec.seed = seed;
  return generate_instance(spec);
}

ExactParams grid_params(std::uint64_t seed) {
  ExactParams p;
  p.approx.k = kGridK;
  p.approx.delta = kGridDelta;
  p.approx.seed = derive_seed(seed, 0xACCE);
  p.approx.threads = 1;  // seeds run in parallel instead
  return p;
}

// supp_{>=c1} of the schoolbook product and its values.
SparseResult oracle_support(const Instance& inst, double c1) {
  return testing::significant_entries(naive_convolve(inst.a, inst.b), c1);
}

bool same_support(const SparseResult& got, const SparseResult& want) {
  if (got.size() != want.size()) return false;
  for (auto g = got.begin(), w = want.begin(); g != got.end(); ++g, ++w)
    if (g->first != w->first) return false;
  return true;
}

double max_value_err(const SparseResult& got, const SparseResult& want) {
  double worst = 0;
  for (const auto& [i, v] : want) {
    const auto it = got.find(i);
    worst = std::max(worst, it == got.end() ? INFINITY : std::abs(it->second - v));
  }
  return worst;
}

bool integer_match(const SparseResult& got, const SparseResult& want) {
  if (!same_support(got, want)) return false;
  for (const auto& [i, v] : want)
    if (got.at(i) != static_cast<double>(round_to_int(v))) return false;
  return true;
}

bool bitwise_equal(const SparseResult& x, const SparseResult& y) {
  if (x.size() != y.size()) return false;
  for (auto i = x.begin(), j = y.begin(); i != x.end(); ++i, ++j)
    if (i->first != j->first || std::memcmp(&i->second, &j->second, sizeof(double)) != 0)
      return false;
  return true;
}

// ---------------------------------------------------------------------------

Outcome golden_convolutions() {
  struct Case {
    std::vector<double> a, b, c;
  };
  const std::vector<Case> cases{
      {{1, 2, 4, 3, 5, 0, 7}, {1, 4, 3, 6, 7, 8, 9}, {1, 6, 15, 31, 48, 75, 93, 129, 116, 109, 94, 56, 63}},
      {{0, 1, 0, 1, 0, 1, 0}, {0, 1, 0, 1, 0, 1, 0}, {0, 0, 1, 0, 2, 0, 3, 0, 2, 0, 1, 0, 0}},
      {{0, 1, 0, 1, 0, 1, 0}, {0, 1, 0, 1, 1, 1, 1}, {0, 0, 1, 0, 2, 1, 3, 2, 2, 2, 1, 1, 0}},
  };
  double worst = 0;
  for (const auto& c : cases) {
    const DenseVector a(c.a), b(c.b);
    worst = std::max(worst, max_diff(naive_convolve(a, b), c.c));
    worst = std::max(worst, max_diff(fft_convolve(a, b), c.c));
  }
  return {worst <= 1e-9, fmt("max abs error %.3g over 3 examples x {naive, fft} (limit 1e-9)", worst)};
}

Outcome derivative_golden() {
  const auto d = derivative(DenseVector({3, 1, 2, 1, 2, 1, 1}), IndexBase::One);
  const std::vector<double> want{3, 2, 6, 4, 10, 6, 7};
  const bool exact = d.vector() == want;
  std::string got;
  for (double x : d) got += fmt("%g,", x);
  got.pop_back();
  return {exact, "derivative base 1 = (" + got + ")"};
}

Outcome oracle_equivalence() {
  Rng rng(0xC3);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(1 + uniform_below(rng, 64));
    const bool ints = t % 2 == 0;
    const DenseVector a(testing::random_values(rng, n, 10, ints));
    const DenseVector b(testing::random_values(rng, n, 10, ints));
    worst = std::max(worst, max_diff(fft_convolve(a, b), naive_convolve(a, b).vector()));
  }
  return {worst <= 1e-8, fmt("1000 pairs, max |fft - naive| = %.3g (limit 1e-8)", worst)};
}

Outcome fold_commutation() {
  Rng rng(0xC4);
  const auto primes = testing::primes_upto(31);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::size_t>(1 + uniform_below(rng, 64));
    const DenseVector a(testing::random_values(rng, n, 10, t % 2 == 0));
    const DenseVector b(testing::random_values(rng, n, 10, t % 2 == 0));
    const auto product = naive_convolve(a, b).vector();
    for (auto p : primes) {
      const auto lhs = testing::brute_fold(product, p);
      const auto rhs = cyclic_convolve(fold(a.values(), p), fold(b.values(), p), p);
      worst = std::max(worst, testing::max_abs_diff(lhs, rhs));
    }
  }
  return {worst <= 1e-8, fmt("100 pairs x %zu primes <= 31, max deviation %.3g (limit 1e-8)",
                             primes.size(), worst)};
}

Outcome isolation_probability() {
  const std::size_t n = 1 << 16, k = 64;
  // Draw until the significant product has exactly k distinct entries.
  Instance inst;
  for (std::uint64_t seed = 0;; ++seed) {
    InstanceSpec spec;
    spec.n = n;
    spec.s_a = 8;
    spec.s_b = 8;
    spec.seed = derive_seed(0xC5, seed);
    inst = generate_instance(spec);
    if (inst.k_effective == k) break;
  }
  std::vector<std::size_t> support;
  for (const auto& [i, v] : inst.significant_product) support.push_back(i);
  const std::uint64_t m = 4 * k * ceil_log2(n) * ceil_log2(k);
  const std::size_t fixed = support[support.size() / 2];

  Rng rng(0xC5);
  std::size_t collided = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) collided += !is_isolated(fixed, support, sample_prime(m, rng));
  const double frac = double(collided) / trials;
  return {frac <= 0.30, fmt("m = %llu, index %zu non-isolated under %zu of %d primes (%.4f, limit 0.30)",
                            (unsigned long long)m, fixed, collided, trials, frac)};
}

Outcome approx_end_to_end() {
  std::vector<char> ok(kGridSeeds, 0);
  std::vector<double> err(kGridSeeds, 0);
  parallel_for(kGridSeeds, 0, [&](std::size_t s) {
    const auto inst = grid_instance(s);
    const auto params = grid_params(s);
    const auto truth = oracle_support(inst, params.approx.c1);
    const auto got = approx_sparse_convolve(inst.a, inst.b, params.approx);
    err[s] = max_value_err(got, truth);
    ok[s] = same_support(got, truth) && err[s] <= 0.01;
  });
  std::size_t wins = 0;
  double worst_ok = 0;
  for (std::size_t s = 0; s < kGridSeeds; ++s)
    if (ok[s]) {
      ++wins;
      worst_ok = std::max(worst_ok, err[s]);
    }
  return {wins >= 90, fmt("%zu/100 seeds exact support with error <= 0.01 (need 90); worst "
                          "error among successes %.3g", wins, worst_ok)};
}

struct ExactRun {
  bool ok = false;
  Instance inst;
  ExactParams params;
  ExactTrace trace;
};

std::vector<ExactRun> exact_grid_runs() {
  std::vector<ExactRun> runs(kGridSeeds);
  parallel_for(kGridSeeds, 0, [&](std::size_t s) {
    auto& run = runs[s];
    run.inst = grid_instance(s);
    run.params = grid_params(s);
    const auto truth = oracle_support(run.inst, run.params.approx.c1);
    const auto got = exact_sparse_convolve(run.inst.a, run.inst.b, run.params, nullptr, &run.trace);
    run.ok = integer_match(got, truth);
  });
  return runs;
}

Outcome exact_end_to_end() {
  const auto runs = exact_grid_runs();
  std::size_t wins = 0;
  for (const auto& r : runs) wins += r.ok;

  // Planted defect: a correct C0 with one entry removed, one correction level.
  std::vector<char> restored(kGridSeeds, 0);
  parallel_for(kGridSeeds, 0, [&](std::size_t s) {
    const auto inst = grid_instance(derive_seed(0xDEFEC7, s));
    auto params = grid_params(derive_seed(0xDEFEC7, s));
    SparseResult correct;
    for (const auto& [i, v] : oracle_support(inst, params.approx.c1))
      correct[i] = static_cast<double>(round_to_int(v));
    auto planted = correct;
    Rng rng(derive_seed(0xDEFEC7, s, 1));
    planted.erase(std::next(planted.begin(), long(uniform_below(rng, planted.size()))));
    const auto fixed = run_correction_levels(inst.a, inst.b, planted, params, 1);
    restored[s] = bitwise_equal(fixed, correct);
  });
  std::size_t repaired = 0;
  for (char r : restored) repaired += r;

  return {wins >= 90 && repaired >= 95,
          fmt("%zu/100 seeds exact (need 90); planted defect restored by one level in %zu/100 "
              "(need 95)", wins, repaired)};
}

Outcome residual_contraction() {
  const auto runs = exact_grid_runs();
  std::size_t checked = 0, monotone = 0, converged = 0;
  std::string first_bad;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const auto& run = runs[s];
    if (!run.ok) continue;
    ++checked;
    const auto m = exact_schedule(run.inst.n, run.params).m;
    std::vector<std::size_t> norms;
    for (std::size_t l = 0; l < run.trace.levels.size(); ++l)
      norms.push_back(residual_norm(run.inst.a, run.inst.b, run.trace.levels[l],
                                    run.params.approx.c1, m, 3, derive_seed(s, l)));
    bool mono = true;
    for (std::size_t l = 1; l < norms.size(); ++l) mono = mono && norms[l] <= norms[l - 1];
    monotone += mono;
    converged += norms.back() == 0;
    if ((!mono || norms.back() != 0) && first_bad.empty()) {
      first_bad = fmt("; seed %zu norms:", s);
      for (auto x : norms) first_bad += fmt(" %zu", x);
    }
  }
  const bool pass = checked > 0 && monotone == checked && converged == checked;
  return {pass, fmt("%zu successful runs: %zu non-increasing, %zu end at 0", checked, monotone,
                    converged) + first_bad};
}

Outcome output_sensitive_work() {
  InstanceSpec spec;
  spec.n = 1 << 20;
  spec.s_a = 8;
  spec.s_b = 8;
  spec.seed = 0xC9;
  const auto inst = generate_instance(spec);

  ApproxParams params;
  params.k = 64;
  params.delta = 0.1;
  params.seed = 0xC9;
  RunStats sparse;
  auto t0 = std::chrono::steady_clock::now();
  const auto got = approx_sparse_convolve(inst.a, inst.b, params, &sparse);
  const double sparse_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  FftCounter dense;
  t0 = std::chrono::steady_clock::now();
  const auto full = fft_convolve(inst.a, inst.b, &dense);
  const double dense_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const double ratio = double(sparse.fft_work) / double(dense.work.load());
  const auto sched = approx_schedule(spec.n, params);
  return {ratio < 0.25,
          fmt("approx work %llu (%zu sketches, m = %llu) vs dense %llu: ratio %.2f (limit 0.25); "
              "wall %.0f ms vs %.0f ms; recovered %zu of %zu",
              (unsigned long long)sparse.fft_work, sparse.sketches, (unsigned long long)sched.m,
              (unsigned long long)dense.work.load(), ratio, sparse_ms, dense_ms, got.size(),
              norm_ge(full.values(), params.c1))};
}

Outcome schedule_bound() {
  std::string worst;
  bool pass = true;
  for (std::size_t k : {16u, 64u, 256u}) {
    for (double delta : {0.1, 0.01}) {
      ExactParams p;
      p.approx.k = k;
      p.approx.delta = delta;
      const auto s = exact_schedule(1 << 20, p);
      const double bound =
          10.0 * p.R_mult * std::log2(2.0 * double(s.levels) / delta) + double(s.levels);
      pass = pass && double(s.total_repetitions()) <= bound;
      worst += fmt(" k=%zu d=%g: %zu<=%.1f", k, delta, s.total_repetitions(), bound);
    }
  }
  return {pass, "sum R_l vs bound:" + worst};
}

Outcome determinism() {
  InstanceSpec spec;
  spec.n = 1 << 12;
  spec.s_a = 6;
  spec.s_b = 7;
  spec.seed = 0xCB;
  const auto inst = generate_instance(spec);

  std::string bad;
  for (auto engine : {Engine::Naive, Engine::Fft, Engine::Approx, Engine::Exact}) {
    ExactParams p;
    p.approx.k = 42;
    p.approx.seed = 0xCB;
    p.approx.threads = 1;
    const auto first = run_engine(engine, inst.a, inst.b, p);
    p.approx.threads = 4;
    const auto second = run_engine(engine, inst.a, inst.b, p);
    if (!bitwise_equal(first.result, second.result) || first.stats.fft_work != second.stats.fft_work)
      bad += std::string(" ") + std::string(engine_name(engine));
  }

  const auto cfg = BenchmarkConfig::from_json(R"({
    "master_seed": 11, "repetitions": 2,
    "engines": ["naive", "fft", "approx", "exact"],
    "instances": [{"name": "d", "n": 2048, "sa": 5, "sb": 5},
                  {"name": "r", "n": 4096, "sa": 4, "sb": 4, "vmin": 1.5, "vmax": 3,
                   "integer_values": false}]})");
  auto csv_without_timing = [&](unsigned jobs) {
    auto result = run_benchmark(cfg, jobs);
    for (auto& row : result.rows) row.wall_ms = 0;
    std::ostringstream out;
    write_report_csv(out, result.rows);
    return out.str();
  };
  const bool csv_same = csv_without_timing(1) == csv_without_timing(4);
  if (!csv_same) bad += " csv";
  return {bad.empty(), bad.empty() ? "4 engines bitwise identical across runs and thread counts; "
                                     "16 CSV rows identical"
                                   : "differs:" + bad};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> kCriteria{
    {1, {"golden convolutions", golden_convolutions}},
    {2, {"derivative golden", derivative_golden}},
    {3, {"fft vs naive oracle", oracle_equivalence}},
    {4, {"fold/convolution commutation", fold_commutation}},
    {5, {"isolation probability", isolation_probability}},
    {6, {"approximate recovery end to end", approx_end_to_end}},
    {7, {"exact recovery end to end", exact_end_to_end}},
    {8, {"residual contraction", residual_contraction}},
    {9, {"output-sensitive FFT work", output_sensitive_work}},
    {10, {"repetition schedule bound", schedule_bound}},
    {11, {"determinism", determinism}},
};

bool run(int id) {
  const auto& [name, body] = kCriteria.at(id);
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %d %s: %s (%s) [%.1fs]\n", id, out.pass ? "PASS" : "FAIL", name,
              out.detail.c_str(), secs);
  std::fflush(stdout);
  return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (ids.empty())
    for (const auto& [id, _] : kCriteria) ids.push_back(id);

  bool all = true;
  for (int id : ids) {
    if (!kCriteria.count(id)) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    all = run(id) && all;
  }
  return all ? 0 : 1;
}
