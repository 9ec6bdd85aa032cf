#include "sparseconv/sparseconv.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "sparseconv/benchmark.hpp"
#include "sparseconv/instance.hpp"
#include "sparseconv/recover_exact.hpp"

struct sc_instance {
  sparseconv::Instance inst;
};

struct sc_vector {
  sparseconv::DenseVector values;
};

struct sc_result {
  std::vector<std::size_t> indices;
  std::vector<double> values;
  std::uint64_t fft_work = 0;
  double wall_ms = 0.0;
};

namespace {

thread_local std::string last_error;

sc_status fail(sc_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps the core's exception types onto status codes.
template <typename F>
sc_status guarded(sc_status engine_default, F&& body) {
  try {
    body();
    return SC_OK;
  } catch (const sparseconv::InfeasibleInstance& e) {
    return fail(SC_ERR_INFEASIBLE, e.what());
  } catch (const sparseconv::FormatError& e) {
    return fail(SC_ERR_FORMAT, e.what());
  } catch (const sparseconv::IoError& e) {
    return fail(SC_ERR_IO, e.what());
  } catch (const sparseconv::ConfigError& e) {
    return fail(SC_ERR_INVALID, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SC_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(engine_default, "out of memory");
  } catch (const std::exception& e) {
    return fail(engine_default, e.what());
  }
}

sparseconv::ExactParams to_params(const sc_params& p) {
  sparseconv::ExactParams out;
  out.approx.k = p.k;
  out.approx.delta = p.delta;
  out.approx.c1 = p.c1;
  out.approx.tau = p.tau;
  out.approx.m_mult = p.m_mult;
  out.approx.L_mult = p.L_mult;
  out.approx.min_votes_frac = p.min_votes_frac;
  out.approx.seed = p.seed;
  out.approx.threads = p.threads;
  out.m_mult_exact = p.m_mult_exact;
  out.R_mult = p.R_mult;
  out.level_base = p.level_base;
  out.integer_mode = p.integer_mode != 0;
  return out;
}

}  // namespace

extern "C" {

SC_API const char* sc_last_error(void) { return last_error.c_str(); }

SC_API void sc_instance_spec_default(sc_instance_spec* spec) {
  if (!spec) return;
  const sparseconv::InstanceSpec d;
  *spec = sc_instance_spec{};
  spec->lo = d.lo;
  spec->hi = d.hi;
  spec->integer_values = d.integer_values ? 1 : 0;
  spec->c2 = 0.0;
  spec->noise_density = d.noise_density;
}

SC_API void sc_params_default(sc_params* params) {
  if (!params) return;
  const sparseconv::ExactParams d;
  params->k = d.approx.k;
  params->delta = d.approx.delta;
  params->c1 = d.approx.c1;
  params->tau = d.approx.tau;
  params->m_mult = d.approx.m_mult;
  params->L_mult = d.approx.L_mult;
  params->min_votes_frac = d.approx.min_votes_frac;
  params->m_mult_exact = d.m_mult_exact;
  params->R_mult = d.R_mult;
  params->level_base = d.level_base;
  params->integer_mode = d.integer_mode ? 1 : 0;
  params->seed = d.approx.seed;
  params->threads = d.approx.threads;
}

SC_API sc_status sc_parse_engine(const char* name, sc_engine* out) {
  if (!name || !out) return fail(SC_ERR_INVALID, "null argument");
  const auto e = sparseconv::parse_engine(name);
  if (!e) return fail(SC_ERR_INVALID, std::string("unknown engine '") + name + "'");
  *out = static_cast<sc_engine>(*e);
  return SC_OK;
}

SC_API sc_status sc_instance_generate(const sc_instance_spec* spec, sc_instance** out) {
  if (!spec || !out) return fail(SC_ERR_INVALID, "null argument");
  return guarded(SC_ERR_INFEASIBLE, [&] {
    sparseconv::InstanceSpec s;
    s.n = spec->n;
    s.s_a = spec->s_a;
    s.s_b = spec->s_b;
    s.lo = spec->lo;
    s.hi = spec->hi;
    s.integer_values = spec->integer_values != 0;
    if (spec->c2 > 0.0) s.c2 = spec->c2;
    s.noise_density = spec->noise_density;
    if (spec->k_budget > 0) s.k_budget = spec->k_budget;
    s.seed = spec->seed;
    *out = new sc_instance{sparseconv::generate_instance(s)};
  });
}

SC_API sc_status sc_instance_load(const char* path, sc_instance** out) {
  if (!path || !out) return fail(SC_ERR_INVALID, "null argument");
  return guarded(SC_ERR_FORMAT, [&] { *out = new sc_instance{sparseconv::load_instance(path)}; });
}

SC_API sc_status sc_instance_save(const sc_instance* inst, const char* path) {
  if (!inst || !path) return fail(SC_ERR_INVALID, "null argument");
  return guarded(SC_ERR_IO, [&] { sparseconv::save_instance(path, inst->inst); });
}

SC_API void sc_instance_free(sc_instance* inst) { delete inst; }

SC_API size_t sc_instance_n(const sc_instance* inst) { return inst ? inst->inst.n : 0; }

SC_API size_t sc_instance_k_effective(const sc_instance* inst) {
  return inst ? inst->inst.k_effective : 0;
}

SC_API double sc_instance_c1_effective(const sc_instance* inst) {
  return inst ? inst->inst.c1_effective : 0.0;
}

SC_API double sc_instance_c2(const sc_instance* inst) { return inst ? inst->inst.c2 : 0.0; }

SC_API sc_status sc_instance_vector(const sc_instance* inst, char which, sc_vector** out) {
  if (!inst || !out) return fail(SC_ERR_INVALID, "null argument");
  if (which != 'A' && which != 'B') return fail(SC_ERR_INVALID, "which must be 'A' or 'B'");
  return guarded(SC_ERR_INVALID, [&] {
    *out = new sc_vector{which == 'A' ? inst->inst.a : inst->inst.b};
  });
}

SC_API sc_status sc_vector_create(const double* values, size_t n, sc_vector** out) {
  if (!out || (!values && n > 0)) return fail(SC_ERR_INVALID, "null argument");
  return guarded(SC_ERR_INVALID, [&] {
    *out = new sc_vector{sparseconv::DenseVector(std::vector<double>(values, values + n))};
  });
}

SC_API sc_status sc_vector_load(const char* path, char which, sc_vector** out) {
  if (!path || !out) return fail(SC_ERR_INVALID, "null argument");
  return guarded(SC_ERR_FORMAT, [&] {
    *out = new sc_vector{sparseconv::load_vector(path, which)};
  });
}

SC_API void sc_vector_free(sc_vector* v) { delete v; }

SC_API size_t sc_vector_size(const sc_vector* v) { return v ? v->values.size() : 0; }

SC_API const double* sc_vector_data(const sc_vector* v) {
  return v ? v->values.values().data() : nullptr;
}

SC_API sc_status sc_convolve(sc_engine engine, const sc_vector* a, const sc_vector* b,
                             const sc_params* params, sc_result** out) {
  if (!a || !b || !params || !out) return fail(SC_ERR_INVALID, "null argument");
  if (engine < SC_ENGINE_NAIVE || engine > SC_ENGINE_EXACT)
    return fail(SC_ERR_INVALID, "unknown engine");
  if (a->values.size() != b->values.size())
    return fail(SC_ERR_INVALID, "input vectors differ in length");
  const auto p = to_params(*params);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    return fail(SC_ERR_INVALID, e.what());
  }
  return guarded(SC_ERR_ENGINE, [&] {
    const auto res = sparseconv::run_engine(static_cast<sparseconv::Engine>(engine),
                                            a->values, b->values, p);
    auto r = std::make_unique<sc_result>();
    for (const auto& [index, value] : res.result) {
      r->indices.push_back(index);
      r->values.push_back(value);
    }
    r->fft_work = res.stats.fft_work;
    r->wall_ms = res.wall_ms;
    *out = r.release();
  });
}

SC_API void sc_result_free(sc_result* r) { delete r; }

SC_API size_t sc_result_size(const sc_result* r) { return r ? r->indices.size() : 0; }

SC_API sc_status sc_result_entry(const sc_result* r, size_t i, size_t* index, double* value) {
  if (!r || !index || !value) return fail(SC_ERR_INVALID, "null argument");
  if (i >= r->indices.size()) return fail(SC_ERR_INVALID, "entry out of range");
  *index = r->indices[i];
  *value = r->values[i];
  return SC_OK;
}

SC_API uint64_t sc_result_fft_work(const sc_result* r) { return r ? r->fft_work : 0; }

SC_API double sc_result_wall_ms(const sc_result* r) { return r ? r->wall_ms : 0.0; }

SC_API sc_status sc_run_benchmark(const char* config_path, const char* out_dir, unsigned jobs,
                                  size_t* rows_out) {
  if (!config_path || !out_dir) return fail(SC_ERR_INVALID, "null argument");
  return guarded(SC_ERR_ENGINE, [&] {
    const auto result = sparseconv::run_benchmark_to_dir(config_path, out_dir, jobs);
    if (rows_out) *rows_out = result.rows.size();
  });
}

}  // extern "C"
