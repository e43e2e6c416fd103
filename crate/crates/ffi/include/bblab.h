/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef BBLAB_H
#define BBLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `BBLAB_STATUS_OK` is zero; everything else is an error.
 */
typedef enum BblabStatus {
  BBLAB_STATUS_OK = 0,
  BBLAB_STATUS_NULL_POINTER = 1,
  BBLAB_STATUS_INVALID_ARGUMENT = 2,
  BBLAB_STATUS_PARSE_ERROR = 3,
  /**
   * A verification found a disagreement.
   */
  BBLAB_STATUS_MISMATCH = 4,
  /**
   * The enumeration space exceeds the guard.
   */
  BBLAB_STATUS_SPACE_TOO_LARGE = 5,
  /**
   * The output buffer is too small.
   */
  BBLAB_STATUS_BUFFER_TOO_SMALL = 6,
  BBLAB_STATUS_PANIC = 7,
} BblabStatus;

/**
 * A validated transition table.
 */
typedef struct BblabMachine BblabMachine;

/**
 * A machine together with a configuration being stepped.
 */
typedef struct BblabRun BblabRun;

/**
 * Outcome of an exhaustive enumeration.
 */
typedef struct BblabEnumerationSummary {
  uint64_t machines;
  uint64_t halting;
  uint64_t non_halting;
  uint64_t undecided;
  /**
   * Longest halting run; meaningful only when `has_max` is true.
   */
  uint64_t max_steps;
  bool has_max;
  uint64_t champion_count;
} BblabEnumerationSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the last failed call on this thread, or null. Valid until
 * the next `bblab_` call on the same thread.
 */
const char *bblab_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bblab_string_free(char *s);

/**
 * Loads `m54`, `m152` or `bb5-champion`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum BblabStatus bblab_machine_builtin(const char *name, struct BblabMachine **out);

/**
 * Parses a machine in the `.tm` text format.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` writable.
 */
enum BblabStatus bblab_machine_parse(const char *src, struct BblabMachine **out);

/**
 * Parses a compact table such as `1RB1LB_1LA---`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` writable.
 */
enum BblabStatus bblab_machine_parse_compact(const char *src, struct BblabMachine **out);

/**
 * Writes the canonical `.tm` text of `m` to `*out`; free it with
 * [`bblab_string_free`].
 *
 * # Safety
 * `m` must be a live machine handle and `out` writable.
 */
enum BblabStatus bblab_machine_serialize(const struct BblabMachine *m, char **out);

/**
 * # Safety
 * `m` must be a live machine handle or null.
 */
uint32_t bblab_machine_num_states(const struct BblabMachine *m);

/**
 * # Safety
 * `m` must be a live machine handle or null.
 */
uint32_t bblab_machine_num_symbols(const struct BblabMachine *m);

/**
 * # Safety
 * `m` must come from this library and not have been freed. Runs created
 * from it stay valid.
 */
void bblab_machine_free(struct BblabMachine *m);

/**
 * Starts a run of `m` from the blank tape.
 *
 * # Safety
 * `m` must be a live machine handle and `out` writable.
 */
enum BblabStatus bblab_run_new(const struct BblabMachine *m, struct BblabRun **out);

/**
 * Runs at most `budget` further steps, stopping at a halt. The number of
 * steps taken goes to `*taken` when it is not null.
 *
 * # Safety
 * `run` must be a live run handle; `taken` must be writable or null.
 */
enum BblabStatus bblab_run_advance(struct BblabRun *run, uint64_t budget, uint64_t *taken);

/**
 * One step. Stepping a halted run is an `InvalidArgument` error.
 *
 * # Safety
 * `run` must be a live run handle.
 */
enum BblabStatus bblab_run_step(struct BblabRun *run);

/**
 * # Safety
 * `run` must be a live run handle.
 */
uint32_t bblab_run_state(const struct BblabRun *run);

/**
 * # Safety
 * `run` must be a live run handle.
 */
int64_t bblab_run_head(const struct BblabRun *run);

/**
 * Steps taken so far, counting a final Halt.
 *
 * # Safety
 * `run` must be a live run handle.
 */
uint64_t bblab_run_steps(const struct BblabRun *run);

/**
 * # Safety
 * `run` must be a live run handle.
 */
bool bblab_run_is_halted(const struct BblabRun *run);

/**
 * Copies the symbol indices of cells `lo..=hi` into `buf`, which must hold
 * `hi - lo + 1` bytes.
 *
 * # Safety
 * `run` must be a live run handle and `buf` valid for `len` bytes.
 */
enum BblabStatus bblab_run_window(const struct BblabRun *run,
                                  int64_t lo,
                                  int64_t hi,
                                  uint8_t *buf,
                                  size_t len);

/**
 * # Safety
 * `run` must come from this library and not have been freed.
 */
void bblab_run_free(struct BblabRun *run);

/**
 * Scans `2^0 ..= 2^max_n`. Exponents with no ternary digit 2 are written
 * to `buf` (up to `cap` of them) and their number to `*count`. A
 * counterexample (an exponent above 8) yields `Mismatch`.
 *
 * # Safety
 * `count` must be writable; `buf` must be valid for `cap` values or null
 * when `cap` is 0.
 */
enum BblabStatus bblab_scan(uint64_t max_n, uint64_t *buf, size_t cap, size_t *count);

/**
 * Checks that the built-in `m152` simulates `m54` for `steps` steps and
 * writes `f(steps)` to `*f_out` when it is not null.
 *
 * # Safety
 * `f_out` must be writable or null.
 */
enum BblabStatus bblab_verify_simulation(uint64_t steps, uint64_t *f_out);

/**
 * The step `s_n` at which `m54` holds `2^n` and returns to `rewind`.
 */
uint64_t bblab_checkpoint_steps(uint64_t n);

/**
 * Classifies every `n`-state, `k`-symbol machine with a simulation budget.
 * `reduced` selects the tree-normal-form space.
 *
 * # Safety
 * `out` must be writable.
 */
enum BblabStatus bblab_enumerate(uint32_t n,
                                 uint32_t k,
                                 uint64_t budget,
                                 bool reduced,
                                 struct BblabEnumerationSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BBLAB_H */
