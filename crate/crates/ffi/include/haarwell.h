#ifndef HAARWELL_H
#define HAARWELL_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible `hw_*` call.
typedef enum HwStatus {
  HW_STATUS_OK = 0,
  // A required pointer argument was null.
  HW_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  HW_STATUS_INVALID_UTF8 = 2,
  HW_STATUS_PARSE = 3,
  HW_STATUS_INVALID_ARGUMENT = 4,
  // A size cap of the engine was exceeded.
  HW_STATUS_CAP_EXCEEDED = 5,
  // Evaluation at a pole, or a singular system.
  HW_STATUS_POLE = 6,
  HW_STATUS_UNSUPPORTED = 7,
  HW_STATUS_IO = 8,
  // A Rust panic was caught at the boundary.
  HW_STATUS_PANIC = 9,
} HwStatus;

// A Weingarten table: `(key, value)` entries in a fixed order.
typedef struct HwTable HwTable;

// An exact value: a rational function of `n`, or a rational number.
typedef struct HwValue HwValue;

// Result of a Monte-Carlo moment estimate.
typedef struct HwEstimate {
  double mean_re;
  double mean_im;
  double std_error;
  uint64_t samples;
} HwEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// ABI version, `major * 10000 + minor * 100 + patch`.
uint32_t hw_version(void);

// Exact Haar integral of a monomial such as `"u[1,1] ~u[1,1]"`.
//
// `group` is `"unitary"`, `"orthogonal"` or `"free"`. With `symbolic`
// nonzero the result is a function of `n`; otherwise it is evaluated at
// the integer `n`.
//
// # Safety
// String arguments must be null or nul-terminated; `out` must be valid
// for writes.
enum HwStatus hw_integrate(const char *group,
                           const char *monomial,
                           int32_t symbolic,
                           int64_t n,
                           struct HwValue **out);

// One Weingarten value of degree `k`.
//
// `key` is a permutation or class for `"unitary"` (`"(1 2)"`, `"[2,1]"`)
// and a pair of pairings `"{1,2}{3,4}|{1,4}{2,3}"` otherwise. `n` is null
// for the symbolic value, or an integer / rational such as `"5/2"`.
//
// # Safety
// As for [`hw_integrate`].
enum HwStatus hw_wg(const char *group,
                    size_t k,
                    const char *key,
                    const char *n,
                    struct HwValue **out);

// Unitary Weingarten value for a permutation; shorthand for
// `hw_wg("unitary", k, sigma, n, out)`.
//
// # Safety
// As for [`hw_integrate`].
enum HwStatus hw_wg_unitary(size_t k, const char *sigma, const char *n, struct HwValue **out);

// Writes the value in the engine's normal form (`"-1/(n^3-n)"`) to `*out`;
// release it with [`hw_string_free`].
//
// # Safety
// `value` must come from this library; `out` must be valid for writes.
enum HwStatus hw_value_to_string(const struct HwValue *value, char **out);

// Evaluates the value at `x` in floating point (constants ignore `x`).
//
// # Safety
// As for [`hw_value_to_string`].
enum HwStatus hw_value_eval_f64(const struct HwValue *value, double x, double *out);

// # Safety
// `value` must be null or come from this library, and not be used again.
void hw_value_free(struct HwValue *value);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void hw_string_free(char *s);

// Full Weingarten table of degree `k`; `n` as in [`hw_wg`].
//
// # Safety
// As for [`hw_integrate`].
enum HwStatus hw_table_new(const char *group, size_t k, const char *n, struct HwTable **out);

// Number of entries, or 0 for a null table.
//
// # Safety
// `table` must be null or come from [`hw_table_new`].
size_t hw_table_len(const struct HwTable *table);

// Degree `k` of the table, or 0 for a null table.
//
// # Safety
// As for [`hw_table_len`].
size_t hw_table_degree(const struct HwTable *table);

// Key of entry `index`. The pointer is owned by the table and lives as
// long as it does.
//
// # Safety
// As for [`hw_table_len`]; `out` must be valid for writes.
enum HwStatus hw_table_key(const struct HwTable *table, size_t index, const char **out);

// Copy of the value of entry `index`; release with [`hw_value_free`].
//
// # Safety
// As for [`hw_table_key`].
enum HwStatus hw_table_value(const struct HwTable *table, size_t index, struct HwValue **out);

// Group and mode as `"unitary symbolic"`, `"free numeric(5/2)"`;
// release with [`hw_string_free`].
//
// # Safety
// As for [`hw_table_key`].
enum HwStatus hw_table_describe(const struct HwTable *table, char **out);

// # Safety
// `table` must be null or come from [`hw_table_new`], and not be used again.
void hw_table_free(struct HwTable *table);

// Möbius value `Π_c (-1)^{|c|-1} Catalan(|c|-1)` of a permutation of
// `S_k` in cycle notation.
//
// # Safety
// `sigma` must be null or nul-terminated; `out` must be valid for writes.
enum HwStatus hw_moebius(const char *sigma, size_t k, int64_t *out);

// Empirical mean of a monomial over `samples` Haar matrices of size `n`
// (unitary or orthogonal), reproducible from `(seed, stream)`.
//
// # Safety
// String arguments must be null or nul-terminated; `out` must be valid
// for writes.
enum HwStatus hw_estimate_moment(const char *group,
                                 const char *monomial,
                                 size_t n,
                                 size_t samples,
                                 uint64_t seed,
                                 uint64_t stream,
                                 struct HwEstimate *out);

// Message of the last failed call on this thread, or null.
//
// The pointer stays valid until the next `hw_*` call on the same thread.
const char *hw_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAARWELL_H */
