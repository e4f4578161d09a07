#ifndef SEMIREACH_H
#define SEMIREACH_H

/* Generated by cbindgen from semireach-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * The decision of a decide or oracle call.
 */
typedef enum SrAnswer {
  SR_ANSWER_YES = 0,
  SR_ANSWER_NO = 1,
  SR_ANSWER_UNKNOWN = 2,
  SR_ANSWER_UNSUPPORTED = 3,
  /**
   * A non-certified No from the one-generator period heuristic.
   */
  SR_ANSWER_NO_HEURISTIC = 4,
} SrAnswer;

/**
 * Status code returned by every fallible function.
 */
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_ARGUMENT = 1,
  SR_STATUS_INVALID_UTF8 = 2,
  SR_STATUS_PARSE_ERROR = 3,
  SR_STATUS_INVALID_ARGUMENT = 4,
  SR_STATUS_UNSUPPORTED = 5,
  SR_STATUS_INTERNAL_ERROR = 6,
} SrStatus;

/**
 * Opaque handle to a reduction bundle.
 */
typedef struct SrBundle SrBundle;

/**
 * Opaque handle to a decision, including any witness.
 */
typedef struct SrDecision SrDecision;

/**
 * Opaque handle to a parsed problem instance.
 */
typedef struct SrInstance SrInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A static version string; do not free.
 */
const char *sr_version(void);

/**
 * Copies the last error message of this thread; free with
 * `sr_string_free`. Returns null when no error has been recorded.
 */
char *sr_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a semireach function and not freed yet.
 */
void sr_string_free(char *s);

/**
 * Parses the plain-text instance format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum SrStatus sr_instance_parse(const char *text, struct SrInstance **out);

/**
 * # Safety
 * `inst` must be a live handle from this library (or null).
 */
void sr_instance_free(struct SrInstance *inst);

/**
 * Serializes an instance to its canonical text.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be a valid pointer.
 */
enum SrStatus sr_instance_serialize(const struct SrInstance *inst, char **out);

/**
 * Alphabet size, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
uintptr_t sr_instance_letters(const struct SrInstance *inst);

/**
 * Matrix dimension, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
uintptr_t sr_instance_dim(const struct SrInstance *inst);

/**
 * Decides an instance. `oracle_fallback` and `r1_bound` are opt-in bounds
 * for undecidable semirings; pass a negative value to disable.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be a valid pointer.
 */
enum SrStatus sr_decide(const struct SrInstance *inst,
                        int64_t oracle_fallback,
                        int64_t r1_bound,
                        struct SrDecision **out);

/**
 * Bounded brute-force search.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be a valid pointer.
 */
enum SrStatus sr_oracle(const struct SrInstance *inst, uintptr_t max_len, struct SrDecision **out);

/**
 * # Safety
 * `d` must be a live handle or null.
 */
enum SrAnswer sr_decision_answer(const struct SrDecision *d);

/**
 * Witness length for a Yes decision, -1 otherwise.
 *
 * # Safety
 * `d` must be a live handle or null.
 */
intptr_t sr_decision_witness_len(const struct SrDecision *d);

/**
 * Copies the witness letters (1-based) of a Yes decision into `buf`.
 *
 * # Safety
 * `d` must be a live handle; `buf` must point to at least `cap` elements.
 */
enum SrStatus sr_decision_witness(const struct SrDecision *d, uint32_t *buf, uintptr_t cap);

/**
 * # Safety
 * `d` must be a live handle from this library (or null).
 */
void sr_decision_free(struct SrDecision *d);

/**
 * Applies a reduction by name: scalar2, vector2, matrix2, v2m, s2v, s2m,
 * m2v, or cassaigne. Star-mode inputs are converted to plus first.
 *
 * # Safety
 * `inst` must be a live handle; `kind` a NUL-terminated string; `out` a
 * valid pointer.
 */
enum SrStatus sr_reduce(const struct SrInstance *inst, const char *kind, struct SrBundle **out);

/**
 * # Safety
 * `b` must be a live handle or null.
 */
uintptr_t sr_bundle_sub_count(const struct SrBundle *b);

/**
 * Clones the sub-instance at `index` into a fresh handle.
 *
 * # Safety
 * `b` must be a live handle; `out` must be a valid pointer.
 */
enum SrStatus sr_bundle_sub(const struct SrBundle *b, uintptr_t index, struct SrInstance **out);

/**
 * The key/value manifest header of the bundle.
 *
 * # Safety
 * `b` must be a live handle; `out` must be a valid pointer.
 */
enum SrStatus sr_bundle_manifest(const struct SrBundle *b, char **out);

/**
 * # Safety
 * `b` must be a live handle from this library (or null).
 */
void sr_bundle_free(struct SrBundle *b);

/**
 * Serializes the DFA of the satisfying language (separable semirings
 * only).
 *
 * # Safety
 * `inst` must be a live handle; `out` must be a valid pointer.
 */
enum SrStatus sr_dfa_text(const struct SrInstance *inst, char **out);

/**
 * Parses an mpcp file and encodes it as an integer vector-mortality
 * instance.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a valid pointer.
 */
enum SrStatus sr_mpcp_encode(const char *text, struct SrInstance **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SEMIREACH_H */
