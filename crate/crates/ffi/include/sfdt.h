/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SFDT_H
#define SFDT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. Non-negative values are answers, negative values errors.
 */
typedef enum SfdtStatus {
  /**
   * Success, or the question was answered yes.
   */
  SFDT_STATUS_OK = 0,
  /**
   * The question was answered no (for instance, no SFDT exists).
   */
  SFDT_STATUS_NO = 1,
  /**
   * A node or time limit stopped the search.
   */
  SFDT_STATUS_ABORTED = 2,
  SFDT_STATUS_NULL_POINTER = -1,
  /**
   * Malformed JSON, bad UTF-8 or a shape mismatch.
   */
  SFDT_STATUS_INVALID_INPUT = -2,
  /**
   * The input is well formed but outside what the call supports.
   */
  SFDT_STATUS_PRECONDITION = -3,
  /**
   * An internal panic was caught.
   */
  SFDT_STATUS_PANIC = -4,
} SfdtStatus;

/**
 * A cover together with its value map.
 */
typedef struct SfdtInstance SfdtInstance;

/**
 * Outcome of a search.
 */
typedef struct SfdtSolution SfdtSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance from its JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SfdtStatus sfdt_instance_from_json(const char *json, struct SfdtInstance **out);

/**
 * Serialises an instance; release the string with [`sfdt_string_free`].
 *
 * # Safety
 * `inst` must come from [`sfdt_instance_from_json`]; `out` must be valid.
 */
enum SfdtStatus sfdt_instance_to_json(const struct SfdtInstance *inst, char **out);

/**
 * Base vertex count, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t sfdt_instance_n(const struct SfdtInstance *inst);

/**
 * Fiber size, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t sfdt_instance_kappa(const struct SfdtInstance *inst);

/**
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void sfdt_instance_free(struct SfdtInstance *inst);

/**
 * Searches for a strictly f-degenerate transversal. Returns `SFDT_STATUS_OK`
 * when one is found, `SFDT_STATUS_NO` when none exists and
 * `SFDT_STATUS_ABORTED` when a limit was hit; `*out` is set in all three
 * cases. A zero `max_nodes` or `timeout_s` means unlimited.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum SfdtStatus sfdt_solve(const struct SfdtInstance *inst,
                           uint64_t max_nodes,
                           double timeout_s,
                           struct SfdtSolution **out);

/**
 * Like [`sfdt_solve`], but the witness is pushed down by deficiency descent
 * so that every pick is bounded (`strict == false`) or strictly bounded.
 * The strict form needs every fiber sum to exceed the degree.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` a valid pointer.
 */
enum SfdtStatus sfdt_solve_bounded(const struct SfdtInstance *inst,
                                   bool strict,
                                   uint64_t max_nodes,
                                   double timeout_s,
                                   struct SfdtSolution **out);

/**
 * Number of picks in the witness, 0 when there is none.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
size_t sfdt_solution_len(const struct SfdtSolution *sol);

/**
 * Copies the witness into `buf`, which must hold [`sfdt_solution_len`]
 * entries. Returns `SFDT_STATUS_NO` when the solution has no witness.
 *
 * # Safety
 * `sol` must be a live solution handle and `buf` valid for `cap` writes.
 */
enum SfdtStatus sfdt_solution_picks(const struct SfdtSolution *sol, size_t *buf, size_t cap);

/**
 * Search nodes expanded, or 0 for a null handle.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
uint64_t sfdt_solution_nodes(const struct SfdtSolution *sol);

/**
 * Whether the witness has `deg(v, q) <= f(v, q)` at every pick.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
bool sfdt_solution_bounded(const struct SfdtSolution *sol);

/**
 * Whether the witness has `deg(v, q) < f(v, q)` at every pick.
 *
 * # Safety
 * `sol` must be null or a live solution handle.
 */
bool sfdt_solution_strictly_bounded(const struct SfdtSolution *sol);

/**
 * Serialises the solution as the CLI does (`status`, `nodes`, 1-based `witness`).
 *
 * # Safety
 * `sol` must be a live solution handle and `out` a valid pointer.
 */
enum SfdtStatus sfdt_solution_to_json(const struct SfdtSolution *sol, char **out);

/**
 * # Safety
 * `sol` must be null or a handle not yet freed.
 */
void sfdt_solution_free(struct SfdtSolution *sol);

/**
 * Checks whether `picks` (length n, 0-based) is a strictly f-degenerate
 * transversal. Returns `SFDT_STATUS_OK` for yes and `SFDT_STATUS_NO` for no.
 *
 * # Safety
 * `inst` must be a live instance handle and `picks` valid for `len` reads.
 */
enum SfdtStatus sfdt_check_transversal(const struct SfdtInstance *inst,
                                       const size_t *picks,
                                       size_t len);

/**
 * Writes the deficiency `|E(R)| - sum f(v, R(v))` of the transversal.
 *
 * # Safety
 * `inst` must be a live instance handle, `picks` valid for `len` reads and
 * `out` a valid pointer.
 */
enum SfdtStatus sfdt_deficiency(const struct SfdtInstance *inst,
                                const size_t *picks,
                                size_t len,
                                int64_t *out);

/**
 * Decides constructibility. On `SFDT_STATUS_OK` the construction tree is
 * written to `*tree_json` (free with [`sfdt_string_free`]); on
 * `SFDT_STATUS_NO` it is set to null. `tree_json` may be null when only the
 * answer is wanted.
 *
 * # Safety
 * `inst` must be a live instance handle; `tree_json` null or valid.
 */
enum SfdtStatus sfdt_is_constructible(const struct SfdtInstance *inst, char **tree_json);

/**
 * Message for the last negative status on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *sfdt_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void sfdt_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *sfdt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SFDT_H */
