/*
 * sparseconv C API.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an sc_status; on
 * failure a message is available from sc_last_error() on the same thread.
 */
#ifndef SPARSECONV_H_
#define SPARSECONV_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SPARSECONV_BUILDING_LIBRARY)
#define SC_API __attribute__((visibility("default")))
#else
#define SC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_INVALID = 1,    /* bad argument or config */
  SC_ERR_ENGINE = 2,     /* engine failure */
  SC_ERR_INFEASIBLE = 3, /* instance generation infeasible */
  SC_ERR_IO = 4,         /* file could not be read or written */
  SC_ERR_FORMAT = 5      /* malformed instance or vector file */
} sc_status;

typedef enum sc_engine {
  SC_ENGINE_NAIVE = 0,
  SC_ENGINE_FFT = 1,
  SC_ENGINE_APPROX = 2,
  SC_ENGINE_EXACT = 3
} sc_engine;

typedef struct sc_instance sc_instance;
typedef struct sc_vector sc_vector;
typedef struct sc_result sc_result;

typedef struct sc_instance_spec {
  size_t n;
  size_t s_a;
  size_t s_b;
  double lo;
  double hi;
  int integer_values;
  double c2;             /* <= 0 selects 1 / (n^2 ceil(log2 n)) */
  double noise_density;
  size_t k_budget;       /* 0 selects s_a * s_b */
  uint64_t seed;
} sc_instance_spec;

typedef struct sc_params {
  size_t k;
  double delta;
  double c1;
  double tau;
  double m_mult;
  double L_mult;
  double min_votes_frac;
  double m_mult_exact;
  double R_mult;
  double level_base;
  int integer_mode;
  uint64_t seed;
  unsigned threads;      /* 0 = hardware concurrency */
} sc_params;

/* Message for the last failed call on this thread; never NULL. */
SC_API const char* sc_last_error(void);

SC_API void sc_instance_spec_default(sc_instance_spec* spec);
SC_API void sc_params_default(sc_params* params);

SC_API sc_status sc_parse_engine(const char* name, sc_engine* out);

SC_API sc_status sc_instance_generate(const sc_instance_spec* spec,
                                      sc_instance** out);
SC_API sc_status sc_instance_load(const char* path, sc_instance** out);
SC_API sc_status sc_instance_save(const sc_instance* inst, const char* path);
SC_API void sc_instance_free(sc_instance* inst);
SC_API size_t sc_instance_n(const sc_instance* inst);
SC_API size_t sc_instance_k_effective(const sc_instance* inst);
SC_API double sc_instance_c1_effective(const sc_instance* inst);
SC_API double sc_instance_c2(const sc_instance* inst);
/* which is 'A' or 'B'. */
SC_API sc_status sc_instance_vector(const sc_instance* inst, char which,
                                    sc_vector** out);

SC_API sc_status sc_vector_create(const double* values, size_t n,
                                  sc_vector** out);
/* Instance file (section `which`) or plain whitespace-separated values. */
SC_API sc_status sc_vector_load(const char* path, char which, sc_vector** out);
SC_API void sc_vector_free(sc_vector* v);
SC_API size_t sc_vector_size(const sc_vector* v);
SC_API const double* sc_vector_data(const sc_vector* v);

SC_API sc_status sc_convolve(sc_engine engine, const sc_vector* a,
                             const sc_vector* b, const sc_params* params,
                             sc_result** out);
SC_API void sc_result_free(sc_result* r);
SC_API size_t sc_result_size(const sc_result* r);
/* Entries are in ascending index order. */
SC_API sc_status sc_result_entry(const sc_result* r, size_t i, size_t* index,
                                 double* value);
SC_API uint64_t sc_result_fft_work(const sc_result* r);
SC_API double sc_result_wall_ms(const sc_result* r);

/* Runs a JSON benchmark config, writing runs.csv and summary.json into
 * out_dir. rows_out, if non-NULL, receives the number of report rows. */
SC_API sc_status sc_run_benchmark(const char* config_path, const char* out_dir,
                                  unsigned jobs, size_t* rows_out);

#ifdef __cplusplus
}
#endif

#endif /* SPARSECONV_H_ */
