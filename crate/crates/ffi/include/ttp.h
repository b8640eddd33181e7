#ifndef TTP_H
#define TTP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TtpCoord {
  TTP_COORD_NOCH = 0,
  TTP_COORD_SGCH = 1,
  TTP_COORD_PGCH = 2,
  TTP_COORD_LGCH = 3,
} TtpCoord;

typedef enum TtpKps {
  TTP_KPS_SBFS = 0,
  TTP_KPS_MBFS = 1,
  TTP_KPS_SAS = 2,
} TtpKps;

/**
 * Result of a library call.
 */
typedef enum TtpStatus {
  TTP_STATUS_OK = 0,
  TTP_STATUS_NULL_POINTER = 1,
  TTP_STATUS_INVALID_UTF8 = 2,
  TTP_STATUS_PARSE_ERROR = 3,
  TTP_STATUS_VALIDATION_ERROR = 4,
  TTP_STATUS_INVALID_SOLUTION = 5,
  TTP_STATUS_SIZE_GUARD = 6,
  TTP_STATUS_CONFIG_ERROR = 7,
  TTP_STATUS_IO_ERROR = 8,
  TTP_STATUS_TRAINING_ERROR = 9,
  TTP_STATUS_BUFFER_TOO_SMALL = 10,
  TTP_STATUS_PANIC = 11,
} TtpStatus;

/**
 * Opaque parsed instance.
 */
typedef struct TtpInstance TtpInstance;

/**
 * Opaque solver result.
 */
typedef struct TtpSolution TtpSolution;

/**
 * Settings for [`ttp_solve`].
 */
typedef struct TtpSolveOptions {
  enum TtpCoord coord;
  enum TtpKps kps;
  uint64_t timeout_ms;
  uint64_t seed;
  /**
   * Non-zero measures the budget in counted work, which makes runs
   * repeatable.
   */
  uint8_t work_clock;
} TtpSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *ttp_last_error(void);

/**
 * Default options: PGCH coordination, marginal bit-flip search, ten
 * seconds, seed zero, wall clock.
 */
struct TtpSolveOptions ttp_solve_options_default(void);

/**
 * Parses an instance from benchmark-format text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TtpStatus ttp_instance_parse(const char *text, struct TtpInstance **out);

/**
 * Reads an instance file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TtpStatus ttp_instance_load(const char *path, struct TtpInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from this library and not be used afterwards.
 */
void ttp_instance_free(struct TtpInstance *inst);

/**
 * Number of cities, zero for null.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t ttp_instance_num_cities(const struct TtpInstance *inst);

/**
 * Number of items, zero for null.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t ttp_instance_num_items(const struct TtpInstance *inst);

/**
 * Objective of a solution given as a closed tour (`num_cities + 1` ids,
 * starting and ending at city 1) and a list of collected items.
 *
 * # Safety
 * Arrays must hold the stated number of elements; `items` may be null when
 * `items_len` is zero.
 */
enum TtpStatus ttp_evaluate(const struct TtpInstance *inst,
                            const size_t *tour,
                            size_t tour_len,
                            const size_t *items,
                            size_t items_len,
                            double *out_objective);

/**
 * Runs the solver.
 *
 * # Safety
 * `inst` must be a live instance handle, `opts` null (defaults) or valid,
 * and `out` a writable pointer.
 */
enum TtpStatus ttp_solve(const struct TtpInstance *inst,
                         const struct TtpSolveOptions *opts,
                         struct TtpSolution **out);

/**
 * Releases a solution. Null is ignored.
 *
 * # Safety
 * `sol` must come from this library and not be used afterwards.
 */
void ttp_solution_free(struct TtpSolution *sol);

/**
 * Objective of the solution, NaN for null.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
double ttp_solution_objective(const struct TtpSolution *sol);

/**
 * Restarts performed by the run, zero for null.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
uint64_t ttp_solution_restarts(const struct TtpSolution *sol);

/**
 * Copies the closed tour into `buf`. `*len` receives the required length
 * even when the buffer is too small or null.
 *
 * # Safety
 * `buf` must hold `cap` elements or be null; `len` must be writable.
 */
enum TtpStatus ttp_solution_tour(const struct TtpSolution *sol,
                                 size_t *buf,
                                 size_t cap,
                                 size_t *len);

/**
 * Copies the collected item ids, increasing, into `buf`. Sizing works as
 * for [`ttp_solution_tour`].
 *
 * # Safety
 * `buf` must hold `cap` elements or be null; `len` must be writable.
 */
enum TtpStatus ttp_solution_items(const struct TtpSolution *sol,
                                  size_t *buf,
                                  size_t cap,
                                  size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TTP_H */
