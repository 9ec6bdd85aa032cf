// sparseconv command-line tool. Talks to the library only through the C API.

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "sparseconv/sparseconv.h"

namespace {

// Exit codes: 0 success, 1 usage/config error, 2 engine failure,
// 3 generation infeasible.
int exit_code(sc_status status) {
  switch (status) {
    case SC_OK: return 0;
    case SC_ERR_ENGINE: return 2;
    case SC_ERR_INFEASIBLE: return 3;
    default: return 1;
  }
}

int report(sc_status status) {
  if (status != SC_OK) std::fprintf(stderr, "sparseconv: %s\n", sc_last_error());
  return exit_code(status);
}

struct InstanceDeleter {
  void operator()(sc_instance* p) const { sc_instance_free(p); }
};
struct VectorDeleter {
  void operator()(sc_vector* p) const { sc_vector_free(p); }
};
struct ResultDeleter {
  void operator()(sc_result* p) const { sc_result_free(p); }
};

struct GenOptions {
  sc_instance_spec spec{};
  std::string out;
};

struct ConvOptions {
  std::string engine = "approx";
  std::string a, b, out;
  sc_params params{};
};

struct RunOptions {
  std::string config, out_dir;
  unsigned jobs = 1;
};

int run_gen(const GenOptions& opt) {
  sc_instance* raw = nullptr;
  if (auto s = sc_instance_generate(&opt.spec, &raw); s != SC_OK) return report(s);
  std::unique_ptr<sc_instance, InstanceDeleter> inst(raw);
  if (auto s = sc_instance_save(inst.get(), opt.out.c_str()); s != SC_OK) return report(s);
  std::printf("n=%zu k_effective=%zu c1_effective=%.17g c2=%.17g\n", sc_instance_n(inst.get()),
              sc_instance_k_effective(inst.get()), sc_instance_c1_effective(inst.get()),
              sc_instance_c2(inst.get()));
  return 0;
}

int run_conv(const ConvOptions& opt) {
  sc_engine engine;
  if (auto s = sc_parse_engine(opt.engine.c_str(), &engine); s != SC_OK) return report(s);

  sc_vector* raw_a = nullptr;
  sc_vector* raw_b = nullptr;
  if (auto s = sc_vector_load(opt.a.c_str(), 'A', &raw_a); s != SC_OK) return report(s);
  std::unique_ptr<sc_vector, VectorDeleter> a(raw_a);
  const std::string& b_path = opt.b.empty() ? opt.a : opt.b;
  if (auto s = sc_vector_load(b_path.c_str(), 'B', &raw_b); s != SC_OK) return report(s);
  std::unique_ptr<sc_vector, VectorDeleter> b(raw_b);

  sc_result* raw_r = nullptr;
  if (auto s = sc_convolve(engine, a.get(), b.get(), &opt.params, &raw_r); s != SC_OK)
    return report(s);
  std::unique_ptr<sc_result, ResultDeleter> result(raw_r);

  FILE* out = stdout;
  std::unique_ptr<FILE, int (*)(FILE*)> file(nullptr, &std::fclose);
  if (!opt.out.empty()) {
    file.reset(std::fopen(opt.out.c_str(), "w"));
    if (!file) {
      std::fprintf(stderr, "sparseconv: cannot open %s\n", opt.out.c_str());
      return 1;
    }
    out = file.get();
  }

  const size_t entries = sc_result_size(result.get());
  std::fprintf(out, "# engine=%s n=%zu entries=%zu fft_work=%" PRIu64 "\n", opt.engine.c_str(),
               sc_vector_size(a.get()), entries, sc_result_fft_work(result.get()));
  for (size_t i = 0; i < entries; ++i) {
    size_t index = 0;
    double value = 0;
    sc_result_entry(result.get(), i, &index, &value);
    std::fprintf(out, "%zu %.17g\n", index, value);
  }
  std::fprintf(stderr, "wall_ms=%.3f\n", sc_result_wall_ms(result.get()));
  return 0;
}

int run_bench(const RunOptions& opt) {
  size_t rows = 0;
  if (auto s = sc_run_benchmark(opt.config.c_str(), opt.out_dir.c_str(), opt.jobs, &rows);
      s != SC_OK)
    return report(s);
  std::printf("wrote %zu rows to %s\n", rows, opt.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Output-sensitive sparse non-negative convolution"};
  app.require_subcommand(1);

  GenOptions gen;
  sc_instance_spec_default(&gen.spec);
  bool real_values = false;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a sparse instance file");
  gen_cmd->add_option("--n", gen.spec.n, "Vector length")->required();
  gen_cmd->add_option("--sa", gen.spec.s_a, "Significant entries in A")->required();
  gen_cmd->add_option("--sb", gen.spec.s_b, "Significant entries in B")->required();
  gen_cmd->add_option("--vmin", gen.spec.lo, "Smallest significant value")->capture_default_str();
  gen_cmd->add_option("--vmax", gen.spec.hi, "Largest significant value")->capture_default_str();
  gen_cmd->add_option("--c2", gen.spec.c2, "Noise ceiling on A*B (default 1/(n^2 ceil(log2 n)))");
  gen_cmd->add_option("--density", gen.spec.noise_density, "Fraction of positions with noise")
      ->capture_default_str();
  gen_cmd->add_option("--k", gen.spec.k_budget, "Significant-support budget (default sa*sb)");
  gen_cmd->add_flag("--real", real_values, "Draw real instead of integer values");
  gen_cmd->add_option("--seed", gen.spec.seed, "Instance seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output instance file")->required();

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a benchmark grid from a JSON config");
  run_cmd->add_option("--config", run.config, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out-dir", run.out_dir, "Report directory")->required();
  run_cmd->add_option("--jobs", run.jobs, "Parallel grid cells (0 = all cores)")
      ->capture_default_str();

  ConvOptions conv;
  sc_params_default(&conv.params);
  bool real_mode = false;
  auto* conv_cmd = app.add_subcommand("conv", "Convolve two vectors with one engine");
  conv_cmd->add_option("--engine", conv.engine, "naive | fft | approx | exact")
      ->capture_default_str();
  conv_cmd->add_option("--a", conv.a, "Instance file or plain vector file for A")->required();
  conv_cmd->add_option("--b", conv.b, "Instance file or plain vector file for B (default: --a)");
  conv_cmd->add_option("--k", conv.params.k, "Significant-support budget")->capture_default_str();
  conv_cmd->add_option("--delta", conv.params.delta, "Failure probability")->capture_default_str();
  conv_cmd->add_option("--c1", conv.params.c1, "Significance threshold")->capture_default_str();
  conv_cmd->add_option("--tau", conv.params.tau, "Ratio tolerance")->capture_default_str();
  conv_cmd->add_option("--seed", conv.params.seed, "Engine seed")->capture_default_str();
  conv_cmd->add_option("--threads", conv.params.threads, "Worker threads (0 = all cores)");
  conv_cmd->add_flag("--real", real_mode, "Exact engine: keep real values instead of rounding");
  conv_cmd->add_option("--out", conv.out, "Write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*gen_cmd) {
    gen.spec.integer_values = real_values ? 0 : 1;
    return run_gen(gen);
  }
  if (*run_cmd) return run_bench(run);
  conv.params.integer_mode = real_mode ? 0 : 1;
  return run_conv(conv);
}
