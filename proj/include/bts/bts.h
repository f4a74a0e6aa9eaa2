/* C interface to the batched Thompson sampling library.
 *
 * Every function returns a bts_status. On failure, bts_last_error() returns a
 * message for the calling thread that stays valid until that thread's next
 * call into the library.
 */
#ifndef BTS_BTS_H
#define BTS_BTS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BTS_BUILDING_LIBRARY)
#define BTS_API __declspec(dllexport)
#else
#define BTS_API __declspec(dllimport)
#endif
#else
#define BTS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bts_status {
  BTS_OK = 0,
  BTS_ERR_CONFIG = 1,    /* unreadable file, syntax error, invalid value */
  BTS_ERR_INVARIANT = 2, /* a run broke an asserted invariant, or a verification check failed */
  BTS_ERR_IO = 3,        /* an output file could not be written */
  BTS_ERR_ARGUMENT = 4,  /* null handle, index out of range, domain error */
  BTS_ERR_INTERNAL = 5
} bts_status;

/* Parsed experiment file. */
typedef struct bts_experiment_file bts_experiment_file;

BTS_API const char* bts_version(void);
BTS_API const char* bts_last_error(void);

BTS_API bts_status bts_config_load(const char* path, bts_experiment_file** out);
BTS_API void bts_config_free(bts_experiment_file* file);

BTS_API bts_status bts_config_set_seed(bts_experiment_file* file, uint64_t seed);
BTS_API bts_status bts_config_set_output_dir(bts_experiment_file* file, const char* dir);
BTS_API bts_status bts_config_experiment_count(const bts_experiment_file* file, size_t* count);
/* The returned string is owned by the handle. */
BTS_API bts_status bts_config_experiment_name(const bts_experiment_file* file, size_t index, const char** name);

/* Runs all experiments, or only `experiment` when non-null. threads == 0 uses
 * the hardware concurrency; a negative value keeps the file's setting. Progress
 * goes to stderr when verbose != 0. */
BTS_API bts_status bts_run_experiments(const bts_experiment_file* file, const char* experiment, int threads,
                                       int verbose);

/* Runs the verification suite and writes <out>/verification.csv. Returns
 * BTS_ERR_INVARIANT if an asserted check failed; failed_checks receives the
 * count when non-null. */
BTS_API bts_status bts_run_verification(const bts_experiment_file* file, int threads, int verbose,
                                        size_t* failed_checks);

/* Standard normal upper tail and its inverse. */
BTS_API bts_status bts_q_function(double x, double* out);
BTS_API bts_status bts_q_inverse(double p, double* out);

/* 1 + K + K log_alpha(T / K). */
BTS_API bts_status bts_batch_count_bound(size_t num_arms, double alpha, int64_t horizon, double* out);

#ifdef __cplusplus
}
#endif

#endif /* BTS_BTS_H */
