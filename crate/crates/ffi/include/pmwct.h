#ifndef PMWCT_H
#define PMWCT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PmwctStatus {
  PMWCT_STATUS_OK = 0,
  PMWCT_STATUS_NULL_POINTER = 1,
  PMWCT_STATUS_INVALID_ARGUMENT = 2,
  PMWCT_STATUS_PARSE = 3,
  PMWCT_STATUS_VALIDATION = 4,
  PMWCT_STATUS_INFEASIBLE = 5,
  PMWCT_STATUS_UNSUPPORTED = 6,
  PMWCT_STATUS_MAPPING = 7,
  PMWCT_STATUS_SIZE_GUARD = 8,
  PMWCT_STATUS_EXTERNAL_SOLVER = 9,
  PMWCT_STATUS_IO = 10,
  PMWCT_STATUS_UTF8 = 11,
  PMWCT_STATUS_PANIC = 12,
} PmwctStatus;

typedef enum PmwctGraphKind {
  PMWCT_GRAPH_KIND_AF = 0,
  PMWCT_GRAPH_KIND_EAF = 1,
} PmwctGraphKind;

typedef enum PmwctForm {
  PMWCT_FORM_TI = 0,
  PMWCT_FORM_CIQP = 1,
  PMWCT_FORM_PTI = 2,
  PMWCT_FORM_AF = 3,
  PMWCT_FORM_EAF = 4,
} PmwctForm;

typedef enum PmwctFormat {
  PMWCT_FORMAT_LP = 0,
  PMWCT_FORMAT_MPS = 1,
} PmwctFormat;

/**
 * Opaque problem instance.
 */
typedef struct PmwctInstance PmwctInstance;

/**
 * Opaque schedule.
 */
typedef struct PmwctSchedule PmwctSchedule;

typedef struct PmwctGraphStats {
  size_t nodes;
  size_t job_arcs;
  size_t loss_arcs;
  size_t variables;
} PmwctGraphStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next call into this library on the same thread.
 */
const char *pmwct_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void pmwct_string_free(char *s);

/**
 * Parses the text instance format (`n m` header, then `p w` rows).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum PmwctStatus pmwct_instance_parse(const char *text, struct PmwctInstance **out);

/**
 * Builds an instance from `n` processing times and weights.
 *
 * # Safety
 * `p` and `w` must point to `n` readable values; `out` must be writable.
 */
enum PmwctStatus pmwct_instance_new(size_t m,
                                    size_t n,
                                    const uint64_t *p,
                                    const uint64_t *w,
                                    struct PmwctInstance **out);

/**
 * Random instance from the same generator as the CLI.
 *
 * # Safety
 * `out` must be writable.
 */
enum PmwctStatus pmwct_instance_generate(size_t n,
                                         size_t m,
                                         uint64_t p_max,
                                         uint64_t w_max,
                                         uint64_t seed,
                                         struct PmwctInstance **out);

/**
 * # Safety
 * `inst` must be NULL or a handle from this library, not yet freed.
 */
void pmwct_instance_free(struct PmwctInstance *inst);

/**
 * Number of jobs, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle.
 */
size_t pmwct_instance_jobs(const struct PmwctInstance *inst);

/**
 * Number of machines, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle.
 */
size_t pmwct_instance_machines(const struct PmwctInstance *inst);

/**
 * Serializes the instance; free the result with `pmwct_string_free`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum PmwctStatus pmwct_instance_write(const struct PmwctInstance *inst, char **out);

/**
 * Horizon `T` and lower bound `T'` on the last completion.
 *
 * # Safety
 * `inst` must be a live handle; `t` and `t_prime` must be writable.
 */
enum PmwctStatus pmwct_horizon(const struct PmwctInstance *inst, uint64_t *t, uint64_t *t_prime);

/**
 * Size of the AF or EAF graph (all EAF reductions on).
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum PmwctStatus pmwct_graph_stats(const struct PmwctInstance *inst,
                                   enum PmwctGraphKind kind,
                                   bool strict_figure,
                                   struct PmwctGraphStats *out);

/**
 * Writes a MILP formulation as LP or MPS text; free with
 * `pmwct_string_free`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum PmwctStatus pmwct_model_emit(const struct PmwctInstance *inst,
                                  enum PmwctForm form,
                                  enum PmwctFormat format,
                                  char **out);

/**
 * Exact optimum by enumeration; fails with `SizeGuard` on large inputs.
 * `out_value` may be NULL.
 *
 * # Safety
 * `inst` must be a live handle; `out_sched` must be writable.
 */
enum PmwctStatus pmwct_solve_exact(const struct PmwctInstance *inst,
                                   struct PmwctSchedule **out_sched,
                                   uint64_t *out_value);

/**
 * Iterated local search with `iterations` iterations (deterministic for a
 * given seed). `out_value` may be NULL.
 *
 * # Safety
 * `inst` must be a live handle; `out_sched` must be writable.
 */
enum PmwctStatus pmwct_solve_ils(const struct PmwctInstance *inst,
                                 uint64_t seed,
                                 uint64_t iterations,
                                 struct PmwctSchedule **out_sched,
                                 uint64_t *out_value);

/**
 * # Safety
 * `sched` must be NULL or a handle from this library, not yet freed.
 */
void pmwct_schedule_free(struct PmwctSchedule *sched);

/**
 * Number of machines in the schedule, or 0 for NULL.
 *
 * # Safety
 * `sched` must be NULL or a live handle.
 */
size_t pmwct_schedule_machines(const struct PmwctSchedule *sched);

/**
 * Copies the job ids of machine `k` (0-based) into `buf`. `len` receives
 * the machine's length; pass `cap = 0` to query it.
 *
 * # Safety
 * `sched` must be a live handle; `buf` must hold `cap` values; `len` must
 * be writable.
 */
enum PmwctStatus pmwct_schedule_jobs(const struct PmwctSchedule *sched,
                                     size_t k,
                                     size_t *buf,
                                     size_t cap,
                                     size_t *len);

/**
 * Total weighted completion time of `sched` for `inst`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum PmwctStatus pmwct_schedule_value(const struct PmwctInstance *inst,
                                      const struct PmwctSchedule *sched,
                                      uint64_t *out);

/**
 * Schedule file text (`objective V`, then `machine k: ...` lines).
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum PmwctStatus pmwct_schedule_write(const struct PmwctInstance *inst,
                                      const struct PmwctSchedule *sched,
                                      char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PMWCT_H */
