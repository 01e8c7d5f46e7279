#ifndef LPINF_H
#define LPINF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
enum LpinfStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  LPINF_STATUS_OK = 0,
  /**
   * A mathematical check failed; the message carries the witness.
   */
  LPINF_STATUS_VIOLATION = 1,
  /**
   * The input could not be parsed or resolved.
   */
  LPINF_STATUS_INPUT_ERROR = 2,
  LPINF_STATUS_NULL_POINTER = 3,
  LPINF_STATUS_INVALID_UTF8 = 4,
  /**
   * An internal error; the library state is unaffected.
   */
  LPINF_STATUS_PANIC = 5,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum LpinfStatus LpinfStatus;
#else
typedef int32_t LpinfStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * A parsed and resolved document.
 */
typedef struct LpinfDocument LpinfDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and resolves a document. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
LpinfStatus lpinf_document_parse(const char *text, struct LpinfDocument **out);

/**
 * Loads one of the built-in fixture documents by file name, e.g. `"sl2.toml"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
LpinfStatus lpinf_fixture(const char *name, struct LpinfDocument **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `doc` must come from this library and not be used afterwards.
 */
void lpinf_document_free(struct LpinfDocument *doc);

/**
 * Canonical text of the document. Release the string with [`lpinf_string_free`].
 *
 * # Safety
 * `doc` must be a live handle and `out` a valid pointer.
 */
LpinfStatus lpinf_document_serialize(const struct LpinfDocument *doc, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void lpinf_string_free(char *s);

/**
 * Re-runs every check on the document: algebra, modules, morphisms,
 * homotopies (both routes) and the Leibniz algebra, if any.
 *
 * # Safety
 * `doc` must be a live handle.
 */
LpinfStatus lpinf_document_validate(const struct LpinfDocument *doc);

/**
 * Checks that the recursive, closed-form and tree evaluations of `λ_arity`
 * agree on every basis tuple of the document's weak LP module (the identity
 * on the adjoint module if none is selected).
 *
 * # Safety
 * `doc` must be a live handle.
 */
LpinfStatus lpinf_leibniz_agree(const struct LpinfDocument *doc, uint32_t arity);

/**
 * Verifies the Leibniz∞[1] identities through arity `n_max`.
 *
 * # Safety
 * `doc` must be a live handle.
 */
LpinfStatus lpinf_leibniz_identities(const struct LpinfDocument *doc, uint32_t n_max);

/**
 * Compatibility of the Leibniz bracket on `H_tan(M)` with `λ₂`.
 *
 * # Safety
 * `doc` must be a live handle.
 */
LpinfStatus lpinf_htan_check(const struct LpinfDocument *doc);

/**
 * Number of classes of monotonically labelled rooted trees with `n` vertices.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
LpinfStatus lpinf_tree_classes(uint32_t n, uint64_t *out);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into the library on the same thread.
 */
const char *lpinf_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPINF_H */
