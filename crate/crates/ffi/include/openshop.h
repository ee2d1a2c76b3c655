#ifndef OPENSHOP_H
#define OPENSHOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum OsStatus {
  OS_STATUS_OK = 0,
  OS_STATUS_NULL_POINTER = 1,
  OS_STATUS_INVALID_UTF8 = 2,
  OS_STATUS_PARSE_ERROR = 3,
  OS_STATUS_INVALID_ARGUMENT = 4,
  OS_STATUS_INFEASIBLE_SCHEDULE = 5,
  OS_STATUS_LIMIT_EXCEEDED = 6,
  OS_STATUS_SOLVER_ERROR = 7,
  OS_STATUS_PANIC = 8,
} OsStatus;

/**
 * Opaque problem instance.
 */
typedef struct OsInstance OsInstance;

/**
 * Opaque schedule.
 */
typedef struct OsSchedule OsSchedule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *os_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void os_string_free(char *s);

/**
 * Parses an instance from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum OsStatus os_instance_from_json(const char *json, struct OsInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from this library not yet freed.
 */
void os_instance_free(struct OsInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle; `machines` and `jobs` must be writable.
 */
enum OsStatus os_instance_dims(const struct OsInstance *inst, size_t *machines, size_t *jobs);

/**
 * Lower bounds: `P` (largest machine load) and `Q` (largest job work plus
 * delivery time), as strings to free with `os_string_free`.
 *
 * # Safety
 * `inst` must be a live handle; `p_out` and `q_out` must be writable.
 */
enum OsStatus os_bounds(const struct OsInstance *inst, char **p_out, char **q_out);

/**
 * Schedule from Jackson's priority list (largest delivery time first).
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum OsStatus os_solve_jackson(const struct OsInstance *inst, struct OsSchedule **out);

/**
 * List schedule for the priority order `order[0..len]` (0-based jobs,
 * highest priority first).
 *
 * # Safety
 * `inst` must be a live handle, `order` must point to `len` readable
 * values and `out` must be writable.
 */
enum OsStatus os_solve_list(const struct OsInstance *inst,
                            const size_t *order,
                            size_t len,
                            struct OsSchedule **out);

/**
 * Exact branch and bound. `max_combinations = 0` uses the default node
 * limit. On `OS_STATUS_LIMIT_EXCEEDED` the best schedule found is still
 * stored in `out`.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum OsStatus os_solve_exact(const struct OsInstance *inst,
                             uint64_t max_combinations,
                             struct OsSchedule **out);

/**
 * Approximation scheme. `epsilon` is a rational string in (0, 1] (larger
 * values are clamped to 1); `mode` is `"enumerate"` or `"oracle-guided"`;
 * `delta` may be null for the formal grid step; zero `budget` or
 * `max_combinations` selects the default.
 *
 * # Safety
 * `inst` must be a live handle, string arguments NUL-terminated (or null
 * where allowed) and `out` writable.
 */
enum OsStatus os_solve_ptas(const struct OsInstance *inst,
                            const char *epsilon,
                            const char *mode,
                            const char *delta,
                            uint64_t budget,
                            uint64_t max_combinations,
                            struct OsSchedule **out);

/**
 * Number of feasibility violations (0 means feasible). Details go to
 * `os_last_error_message` as one line per violation.
 *
 * # Safety
 * `inst` and `sched` must be live handles; `count` must be writable.
 */
enum OsStatus os_validate(const struct OsInstance *inst,
                          const struct OsSchedule *sched,
                          size_t *count);

/**
 * Maximum lateness of a feasible schedule, as a string to free with
 * `os_string_free`.
 *
 * # Safety
 * `inst` and `sched` must be live handles; `out` must be writable.
 */
enum OsStatus os_schedule_lmax(const struct OsInstance *inst,
                               const struct OsSchedule *sched,
                               char **out);

/**
 * # Safety
 * `sched` must be a live handle; `out` must be writable.
 */
enum OsStatus os_schedule_to_json(const struct OsSchedule *sched, char **out);

/**
 * Parses a schedule; feasibility is not checked (see `os_validate`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum OsStatus os_schedule_from_json(const char *json, struct OsSchedule **out);

/**
 * # Safety
 * `sched` must be null or a handle from this library not yet freed.
 */
void os_schedule_free(struct OsSchedule *sched);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPENSHOP_H */
