/* C ABI for the heightfloor library. Generated by cbindgen. */

#ifndef HEIGHTFLOOR_H
#define HEIGHTFLOOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of every C-ABI call.
 */
typedef enum HfStatus {
  HfStatus_Ok = 0,
  HfStatus_NullPointer = 1,
  HfStatus_InvalidInput = 2,
  HfStatus_DomainError = 3,
  HfStatus_SingularCurve = 4,
  HfStatus_BadReduction = 5,
  HfStatus_UnsupportedPrime = 6,
  HfStatus_CapExceeded = 7,
  HfStatus_PreconditionViolated = 8,
  HfStatus_PrecisionFailure = 9,
  HfStatus_InternalError = 10,
} HfStatus;

/**
 * Opaque curve handle.
 */
typedef struct HfCurve HfCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *hf_version(void);

/**
 * Release a string returned by any hf_* call.
 *
 * # Safety
 * `s` must be a pointer previously returned through an hf_* out-string
 * parameter and not yet freed.
 */
void hf_string_free(char *s);

/**
 * Parse "a1,a2,a3,a4,a6" into a curve handle.
 *
 * # Safety
 * `coeffs` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum HfStatus hf_curve_parse(const char *coeffs, struct HfCurve **out);

/**
 * # Safety
 * `curve` must come from [`hf_curve_parse`] and not be freed twice.
 */
void hf_curve_free(struct HfCurve *curve);

/**
 * Trace of Frobenius a_ell at a good prime ell >= 5.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid.
 */
enum HfStatus hf_curve_trace(const struct HfCurve *curve, uint64_t ell, int64_t *out);

/**
 * Supersingularity test at p >= 5 of good reduction.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid.
 */
enum HfStatus hf_curve_is_supersingular(const struct HfCurve *curve, uint64_t p, bool *out);

/**
 * Weil height of the algebraic number with the given minimal polynomial
 * (descending comma-separated integer coefficients).
 *
 * # Safety
 * `minpoly` must be a valid string; out-pointers valid.
 */
enum HfStatus hf_weil_height(const char *minpoly, double *out_nats, double *out_abs_error);

/**
 * Root-of-unity test; when true, `out_order` receives the order.
 *
 * # Safety
 * `minpoly` must be a valid string; out-pointers valid.
 */
enum HfStatus hf_is_root_of_unity(const char *minpoly, bool *out_is, uint64_t *out_order);

/**
 * ln of the headline floor (log p)^4 / p^(5 p^4).
 *
 * # Safety
 * `out` must be valid.
 */
enum HfStatus hf_final_bound_ln(uint64_t p, double *out);

/**
 * ln of the tame-case floor at a given E.
 *
 * # Safety
 * `out` must be valid.
 */
enum HfStatus hf_tame_bound_ln(uint64_t p, uint64_t cal_e, double *out);

/**
 * ln of the wild-case floor.
 *
 * # Safety
 * `out` must be valid.
 */
enum HfStatus hf_wild_bound_ln(uint64_t p, double *out);

/**
 * Scan for the smallest certified prime; the full outcome document
 * (found certificate or failure histogram) arrives as JSON.
 *
 * # Safety
 * `curve` must be a live handle, `out_json` valid.
 */
enum HfStatus hf_certify_prime_json(const struct HfCurve *curve,
                                    uint32_t d,
                                    uint32_t exponent,
                                    uint64_t p_max,
                                    uint64_t ell_max,
                                    char **out_json);

/**
 * Surjectivity certification scan at one prime, as JSON.
 *
 * # Safety
 * `curve` must be a live handle, `out_json` valid.
 */
enum HfStatus hf_certify_surjective_json(const struct HfCurve *curve,
                                         uint64_t p,
                                         uint64_t ell_max,
                                         char **out_json);

/**
 * Torsion sampling up to nmax against a floor given as its natural log;
 * the floor report arrives as JSON.
 *
 * # Safety
 * `curve` must be a live handle, `out_json` valid.
 */
enum HfStatus hf_torsion_sample_json(const struct HfCurve *curve,
                                     uint32_t n_max,
                                     double bound_ln,
                                     char **out_json);

/**
 * The proof-chain verification report as JSON.
 *
 * # Safety
 * `out_json` must be valid.
 */
enum HfStatus hf_verify_chain_json(uint64_t p, uint32_t d, uint32_t exponent, char **out_json);

/**
 * Every group-theory verifier available at p, as JSON; `out_all_match`
 * receives whether everything matched the frozen expectations.
 *
 * # Safety
 * Out-pointers must be valid.
 */
enum HfStatus hf_gl2_verify_json(uint64_t p, bool *out_all_match, char **out_json);

/**
 * The archimedean embedding-sum inequality check, as JSON.
 *
 * # Safety
 * `minpoly` must be a valid string, `out_json` valid.
 */
enum HfStatus hf_sumexpl_json(const char *minpoly, double delta, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEIGHTFLOOR_H */
