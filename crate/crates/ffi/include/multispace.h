#ifndef MULTISPACE_H
#define MULTISPACE_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Operation policy selector for [`ms_search_count`].
 */
typedef enum MsPolicy {
  MS_POLICY_TOTAL = 0,
  MS_POLICY_CLOSED = 1,
} MsPolicy;

/**
 * Result codes shared by all functions.
 */
typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_UTF8 = 2,
  MS_STATUS_PARSE = 3,
  MS_STATUS_SEMANTIC = 4,
  MS_STATUS_CAP_EXCEEDED = 5,
  MS_STATUS_POLICY_MISMATCH = 6,
  MS_STATUS_INVALID_ARGUMENT = 7,
  MS_STATUS_PANIC = 8,
} MsStatus;

/**
 * Opaque instance handle.
 */
typedef struct MsInstance MsInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance file held in a NUL-terminated UTF-8 string.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
enum MsStatus ms_instance_parse(const char *text, struct MsInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from [`ms_instance_parse`] and not be used afterwards.
 */
void ms_instance_free(struct MsInstance *inst);

/**
 * Writes the number of components.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum MsStatus ms_component_count(const struct MsInstance *inst, size_t *out);

/**
 * Writes the size of the greedy basis.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum MsStatus ms_dim_greedy(const struct MsInstance *inst, size_t *out);

/**
 * Writes the inclusion-exclusion dimension value.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum MsStatus ms_dim_inclusion_exclusion(const struct MsInstance *inst, int64_t *out);

/**
 * Writes whether `candidate` is a multi-vector subspace of `parent`, under
 * the policy of `parent`.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum MsStatus ms_is_multi_subspace(const struct MsInstance *candidate,
                                   const struct MsInstance *parent,
                                   bool *out);

/**
 * Renders the greedy basis, one `label c1,c2,...` line per vector. The
 * string must be released with [`ms_string_free`].
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum MsStatus ms_basis_render(const struct MsInstance *inst, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ms_string_free(char *s);

/**
 * Runs the random search over draws `0..trials` and writes the number of
 * instances on which the two dimension values disagree.
 *
 * # Safety
 * `primes` must point to `prime_count` values; `out` must be valid.
 */
enum MsStatus ms_search_count(const uint64_t *primes,
                              size_t prime_count,
                              size_t max_dim,
                              size_t max_components,
                              size_t max_ambients,
                              enum MsPolicy policy,
                              uint64_t seed,
                              uint64_t trials,
                              uint64_t *out);

/**
 * Message for the last failure on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *ms_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTISPACE_H */
