#ifndef IMP2_H
#define IMP2_H

/*
 * C interface to the IMP2 toolchain: sentence enumeration, program codes,
 * the resource-bounded interpreter, threshold estimation, program-space
 * sweeps and the complexity analysis.
 *
 * Every fallible call returns an imp2_status. On failure the message is
 * available from imp2_last_error() on the calling thread until the next
 * call. Strings returned through char** are owned by the caller and must be
 * released with imp2_string_free. Handles are opaque and released with their
 * matching _free function; passing NULL to a _free function is a no-op.
 *
 * Big integers (sentence indices, program counts) cross the boundary as
 * decimal strings, bit strings as ASCII '0'/'1'.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(IMP2_BUILDING_LIBRARY)
#define IMP2_API __attribute__((visibility("default")))
#else
#define IMP2_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum imp2_status {
  IMP2_OK = 0,
  IMP2_ERR_INVALID_ARGUMENT = 1,
  IMP2_ERR_PARSE = 2,
  IMP2_ERR_DECODE = 3,
  IMP2_ERR_IO = 4,
  IMP2_ERR_MERGE = 5,
  IMP2_ERR_UNDEFINED = 6,
  IMP2_ERR_NO_TERMINATION = 7,
  IMP2_ERR_INTERNAL = 8
} imp2_status;

/* Execution statuses, in the order of the results file. */
typedef enum imp2_run_status {
  IMP2_HALTED = 0,
  IMP2_EXTENSION = 1,
  IMP2_READ_PAST_END = 2,
  IMP2_LOOP_DETECTED = 3,
  IMP2_THRESHOLD_SURPASSED = 4
} imp2_run_status;

IMP2_API const char* imp2_version(void);
IMP2_API const char* imp2_last_error(void);
IMP2_API const char* imp2_status_name(imp2_run_status status);
IMP2_API void imp2_string_free(char* s);

/* ---- sentences ---------------------------------------------------------- */

typedef struct imp2_sentence imp2_sentence;

IMP2_API imp2_status imp2_sentence_parse(const char* text, imp2_sentence** out);
/* `index` is a non-negative decimal numeral of any size. */
IMP2_API imp2_status imp2_sentence_unrank(const char* index,
                                          imp2_sentence** out);
IMP2_API imp2_status imp2_sentence_rank(const imp2_sentence* s, char** index);
IMP2_API imp2_status imp2_sentence_print(const imp2_sentence* s, char** text);
IMP2_API void imp2_sentence_free(imp2_sentence* s);

/* ---- program codes ------------------------------------------------------ */

IMP2_API imp2_status imp2_encode_program(const char* index, const char* input,
                                         char** bits);
IMP2_API imp2_status imp2_decode_program(const char* bits, char** index,
                                         char** input);
/* Number of programs of code length 1..max_len. */
IMP2_API imp2_status imp2_count_programs(unsigned max_len, char** count);

/* ---- execution ---------------------------------------------------------- */

typedef struct imp2_exec_result {
  imp2_run_status status;
  uint64_t steps_used;
  uint64_t bits_consumed;
} imp2_exec_result;

/* `output` receives the output bits when the run Halted, else NULL. It may
 * itself be NULL when the caller does not want the output. */
IMP2_API imp2_status imp2_execute(const imp2_sentence* s, const char* input,
                                  uint64_t threshold, uint64_t max_value_bits,
                                  imp2_exec_result* result, char** output);
IMP2_API imp2_status imp2_execute_program(const char* bits, uint64_t threshold,
                                          uint64_t max_value_bits,
                                          imp2_exec_result* result,
                                          char** output);

/* ---- threshold estimation ----------------------------------------------- */

typedef struct imp2_threshold_params {
  unsigned max_len;
  uint64_t samples;
  uint64_t provisional_budget;
  double quantile;
  double safety_factor;
  uint64_t seed;
  uint64_t max_value_bits;
} imp2_threshold_params;

typedef struct imp2_threshold_estimate {
  uint64_t threshold;
  uint64_t samples_drawn;
  uint64_t halting_samples;
  uint64_t max_halting_steps;
  uint64_t quantile_steps;
  double quantile_used;
  double safety_factor;
  uint64_t rng_seed;
} imp2_threshold_estimate;

/* Fills the documented defaults; max_len and seed are left zero. */
IMP2_API void imp2_threshold_params_init(imp2_threshold_params* params);
IMP2_API imp2_status imp2_estimate_threshold(const imp2_threshold_params* p,
                                             imp2_threshold_estimate* out);

/* ---- sweeps ------------------------------------------------------------- */

typedef struct imp2_aggregate imp2_aggregate;

typedef struct imp2_sweep_params {
  unsigned max_len;
  uint64_t threshold;
  uint64_t max_value_bits;
  uint32_t partition_index;
  uint32_t partition_count;
  unsigned threads;          /* 0: available parallelism */
  const char* seed;          /* recorded in metadata; NULL for "none" */
  const char* invocation;    /* recorded in metadata; may be NULL */
  const char* checkpoint_dir; /* NULL: no checkpointing */
  int verbose;               /* progress on stderr */
} imp2_sweep_params;

IMP2_API void imp2_sweep_params_init(imp2_sweep_params* params);
IMP2_API imp2_status imp2_sweep(const imp2_sweep_params* params,
                                imp2_aggregate** out);
/* "i/k" into index and count. */
IMP2_API imp2_status imp2_parse_partition(const char* text, uint32_t* index,
                                          uint32_t* count);

IMP2_API imp2_status imp2_aggregate_load(const char* path,
                                         imp2_aggregate** out);
IMP2_API imp2_status imp2_aggregate_save(const imp2_aggregate* agg,
                                         const char* path);
/* Whole file (metadata and body) or the body alone. */
IMP2_API imp2_status imp2_aggregate_to_text(const imp2_aggregate* agg,
                                            int body_only, char** text);
IMP2_API imp2_status imp2_aggregate_merge(const imp2_aggregate* const* parts,
                                          size_t count, const char* invocation,
                                          imp2_aggregate** out);
IMP2_API uint64_t imp2_aggregate_total(const imp2_aggregate* agg);
IMP2_API uint64_t imp2_aggregate_status_count(const imp2_aggregate* agg,
                                              imp2_run_status status);
IMP2_API size_t imp2_aggregate_output_count(const imp2_aggregate* agg);
IMP2_API void imp2_aggregate_free(imp2_aggregate* agg);

/* ---- analysis ----------------------------------------------------------- */

IMP2_API imp2_status imp2_spearman(const double* xs, const double* ys,
                                   size_t n, double* out);
IMP2_API imp2_status imp2_pearson(const double* xs, const double* ys, size_t n,
                                  double* out);

typedef struct imp2_correlation {
  double coefficient;
  double p_value;
  size_t n;
  uint32_t permutations;
  uint64_t seed;
} imp2_correlation;

/* method: 0 Spearman, 1 Pearson. */
IMP2_API imp2_status imp2_permutation_test(const double* xs, const double* ys,
                                           size_t n, int method,
                                           uint32_t permutations,
                                           uint64_t seed,
                                           imp2_correlation* out);

typedef struct imp2_external {
  const char* name; /* used in report names: imp2_vs_<name> */
  const char* path; /* CSV: string,frequency or string,ctm */
} imp2_external;

/* Writes the standard report for `agg` into `report_dir`. */
IMP2_API imp2_status imp2_analyze(const imp2_aggregate* agg,
                                  const imp2_external* externals,
                                  size_t external_count,
                                  uint32_t permutations, uint64_t seed,
                                  const char* report_dir);

#ifdef __cplusplus
}
#endif

#endif /* IMP2_H */
