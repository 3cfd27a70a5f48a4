/* divmax: diversity maximization over metric datasets.
 *
 * C interface to the shared library: opaque dataset handles, plain structs
 * for parameters and results, integer status codes. Every function returns
 * DM_OK on success; on failure dm_last_error() describes what went wrong
 * (the message is thread-local).
 */
#ifndef DIVMAX_H
#define DIVMAX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  DM_OK = 0,
  DM_ERR_ARGUMENT = 1,
  DM_ERR_DOMAIN = 2,
  DM_ERR_SHAPE = 3,
  DM_ERR_PARSE = 4,
  DM_ERR_CONFIG = 5,
  DM_ERR_CONSISTENCY = 6,
  DM_ERR_IO = 7,
  DM_ERR_UNSUPPORTED = 8,
  DM_ERR_INTERNAL = 9
} dm_status;

typedef struct dm_dataset dm_dataset; /* opaque */

/* ---- datasets ---------------------------------------------------------- */

/* Synthetic set: k_planted points on the unit sphere surface, the rest
 * uniform in the concentric ball of radius inner_radius (pass 0 for the
 * default 0.8). Deterministic per seed. */
dm_status dm_generate_sphere(int64_t n, int64_t k_planted, int dim, uint64_t seed,
                             double inner_radius, dm_dataset** out);

/* Dense file: whitespace-separated decimals, one point per line. Reading is
 * gzip-transparent. */
dm_status dm_load_dense(const char* path, dm_dataset** out);

/* Sparse file: index:count tokens, one point per line; points with fewer
 * than min_entries entries are dropped (pass 0 for the default of 10). */
dm_status dm_load_sparse(const char* path, int min_entries, dm_dataset** out);

dm_status dm_save_dense(const dm_dataset* ds, const char* path);
int64_t dm_dataset_size(const dm_dataset* ds);
void dm_dataset_free(dm_dataset* ds);

/* ---- experiments ------------------------------------------------------- */

typedef struct {
  char algorithm[16];
  char kind[24];
  int64_t n, k, kprime, ell;
  char partitioning[16];
  uint64_t seed;
  double value;
  double baseline_value; /* meaningful iff has_baseline */
  double ratio;          /* baseline / value, iff has_baseline */
  int has_baseline;
  double millis;
  double throughput_pts_per_sec;
} dm_record;

typedef struct {
  const char* algorithm; /* seq|stream|stream2pass|mr2|mr2rand|mrmulti|mr3gen|oracle */
  const char* kind;      /* remote-edge|remote-clique|remote-star|remote-bipartition|
                          * remote-tree|remote-cycle */
  const char* metric;    /* euclidean|cosine */
  const char* partitioning; /* contiguous|random|adversarial */
  int64_t k;
  int64_t kprime; /* 0 = default 8k */
  int64_t ell;
  double epsilon;
  int ddim;
  double gamma;
  int64_t memory_budget;
  uint64_t seed;
  int strict;
  int threads;
  double cap_c;        /* randomized delegate-cap constant; 0 = default 4 */
  int has_baseline;    /* when set, rows carry baseline and ratio columns */
  double baseline;
  int timing;          /* 0 zeroes the timing columns (byte-stable output) */
} dm_run_params;

/* Fills the struct with the defaults described above. */
void dm_run_params_init(dm_run_params* p);

/* One run; the record describes the solution value and timings. */
dm_status dm_run(const dm_dataset* ds, const dm_run_params* p, dm_record* out);

/* Best value over `repeats` two-round runs with random partitioning; the
 * reference for approximation ratios on instances too large for dm_run with
 * algorithm "oracle". */
dm_status dm_baseline(const dm_dataset* ds, const char* kind, const char* metric, int64_t k,
                      int64_t kprime, int64_t ell, uint64_t seed, int repeats, int threads,
                      double* out_value);

/* Streaming-kernel rate for one (k, kprime) cell; variant is "smm" or
 * "smmext". Source I/O is excluded: the dataset is pre-loaded and only the
 * per-point processing is timed. */
dm_status dm_throughput(const dm_dataset* ds, const char* metric, const char* variant,
                        int64_t k, int64_t kprime, int timing, dm_record* out);

/* ---- CSV --------------------------------------------------------------- */

/* Stable header:
 * algorithm,kind,n,k,kprime,ell,partitioning,seed,value,baseline_value,ratio,
 * millis,throughput_pts_per_sec */
void dm_record_csv_header(char* buf, size_t bufsz);
dm_status dm_record_to_csv(const dm_record* r, char* buf, size_t bufsz);
dm_status dm_record_from_csv(const char* line, dm_record* out);

/* ---- diagnostics ------------------------------------------------------- */

/* Message for the most recent failing call on this thread. */
const char* dm_last_error(void);
const char* dm_version(void);

#ifdef __cplusplus
}
#endif

#endif /* DIVMAX_H */
