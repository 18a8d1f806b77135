/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef DYINGRABBIT_H
#define DYINGRABBIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum DrStatus {
  DR_STATUS_OK = 0,
  DR_STATUS_INVALID_PARAMETER = 1,
  DR_STATUS_INIT_LENGTH_MISMATCH = 2,
  DR_STATUS_UNSUPPORTED = 3,
  DR_STATUS_PARSE = 4,
  DR_STATUS_CONVERGENCE_FAILURE = 5,
  DR_STATUS_ILL_CONDITIONED = 6,
  DR_STATUS_PRECISION_EXHAUSTED = 7,
  DR_STATUS_NULL_POINTER = 8,
  DR_STATUS_PANIC = 9,
} DrStatus;

/**
 * A closed form: roots, coefficients and the seed they reproduce.
 */
typedef struct DrBinetForm DrBinetForm;

/**
 * Exact terms of a sequence window.
 */
typedef struct DrSequence DrSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *dr_version(void);

/**
 * Message for the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *dr_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void dr_string_free(char *s);

/**
 * Terms `C_0 .. C_t`. A null `init` selects the default seed; otherwise
 * `init_len` must equal `k + h - 1`.
 *
 * # Safety
 * `init` must point to `init_len` values when non-null; `out` must be writable.
 */
enum DrStatus dr_sequence_new(uint32_t k,
                              uint32_t h,
                              uint64_t t,
                              const int64_t *init,
                              size_t init_len,
                              struct DrSequence **out);

/**
 * Number of terms held, zero for null.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
size_t dr_sequence_len(const struct DrSequence *seq);

/**
 * Term `i` of the window as a decimal string.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum DrStatus dr_sequence_term(const struct DrSequence *seq, size_t i, char **out);

/**
 * Term `i` as a signed 64-bit integer; fails when it does not fit.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum DrStatus dr_sequence_term_i64(const struct DrSequence *seq, size_t i, int64_t *out);

/**
 * All terms joined by commas.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum DrStatus dr_sequence_to_string(const struct DrSequence *seq, char **out);

/**
 * # Safety
 * `seq` must be null or a handle not yet freed.
 */
void dr_sequence_free(struct DrSequence *seq);

/**
 * Dominant root of `g_{k,h}`. Either output may be null.
 *
 * # Safety
 * Non-null outputs must be writable.
 */
enum DrStatus dr_dominant_root(uint32_t k,
                               uint32_t h,
                               uint32_t precision_bits,
                               char **out_decimal,
                               double *out_approx);

/**
 * Whether `g_{k,h}` has no repeated roots, decided exactly.
 *
 * # Safety
 * `out` must be writable.
 */
enum DrStatus dr_squarefree(uint32_t k, uint32_t h, bool *out);

/**
 * Closed form for `C^(k,h)`. A null `init` selects the default seed.
 *
 * # Safety
 * `init` must point to `init_len` values when non-null; `out` must be writable.
 */
enum DrStatus dr_binet_form_new(uint32_t k,
                                uint32_t h,
                                const int64_t *init,
                                size_t init_len,
                                uint32_t precision_bits,
                                struct DrBinetForm **out);

/**
 * Rebuilds a closed form from its JSON rendering.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum DrStatus dr_binet_form_from_json(const char *json, struct DrBinetForm **out);

/**
 * JSON rendering: roots and coefficients as `(re, im)` decimal pairs.
 *
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum DrStatus dr_binet_form_to_json(const struct DrBinetForm *form, char **out);

/**
 * Recurrence order `k + h - 1`, zero for null.
 *
 * # Safety
 * `form` must be null or a live handle.
 */
size_t dr_binet_form_order(const struct DrBinetForm *form);

/**
 * `C_n` from the closed form, rounded to the nearest integer.
 *
 * # Safety
 * `form` must be a live handle and `out` writable.
 */
enum DrStatus dr_binet_form_eval(const struct DrBinetForm *form, uint64_t n, char **out);

/**
 * # Safety
 * `form` must be null or a handle not yet freed.
 */
void dr_binet_form_free(struct DrBinetForm *form);

/**
 * Counts `n <= n_max` where the rounded closed form differs from the
 * recurrence, doubling precision on numerical failure up to
 * `max_precision_bits`.
 *
 * # Safety
 * `out_mismatches` must be writable.
 */
enum DrStatus dr_verify(uint32_t k,
                        uint32_t h,
                        uint64_t n_max,
                        uint32_t precision_bits,
                        uint32_t max_precision_bits,
                        uint64_t *out_mismatches);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYINGRABBIT_H */
