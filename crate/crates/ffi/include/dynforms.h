#ifndef DYNFORMS_H
#define DYNFORMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum DfStatus {
  DF_STATUS_OK = 0,
  DF_STATUS_NULL_POINTER = 1,
  DF_STATUS_INVALID_UTF8 = 2,
  DF_STATUS_UNKNOWN_MODEL = 3,
  DF_STATUS_INVALID_MODEL = 4,
  DF_STATUS_PARSE = 5,
  DF_STATUS_DOMAIN = 6,
  DF_STATUS_RESONANCE = 7,
  DF_STATUS_OBSTRUCTION = 8,
  DF_STATUS_NOT_HYPERBOLIC = 9,
  DF_STATUS_BUFFER_TOO_SMALL = 10,
  DF_STATUS_INTERNAL = 11,
} DfStatus;

typedef enum DfSubcomplex {
  DF_SUBCOMPLEX_FULL = 0,
  DF_SUBCOMPLEX_INVARIANT = 1,
  DF_SUBCOMPLEX_BASIC = 2,
} DfSubcomplex;

/**
 * Opaque model handle.
 */
typedef struct DfModel DfModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *df_last_error_message(void);

/**
 * Built-in model by name. `n <= 0` selects the family default; `genus`
 * applies to the sl2 models.
 *
 * # Safety
 * `name` must be a valid C string and `out` a valid pointer.
 */
enum DfStatus df_model_new(const char *name, int32_t n, uint32_t genus, struct DfModel **out);

/**
 * Model from the JSON model-file format.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum DfStatus df_model_from_json(const char *json, struct DfModel **out);

/**
 * # Safety
 * `model` must come from `df_model_new`/`df_model_from_json` or be null.
 */
void df_model_free(struct DfModel *model);

/**
 * Number of degree-one generators, or 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle or null.
 */
size_t df_model_generator_count(const struct DfModel *model);

/**
 * Writes `dim H^k` for `k = 0..=n` of the chosen subcomplex into `out`
 * (capacity `len`) and the count into `written`.
 *
 * # Safety
 * `model` must be a live handle; `out` must hold `len` elements;
 * `written` must be valid.
 */
enum DfStatus df_model_cohomology_dims(const struct DfModel *model,
                                       enum DfSubcomplex which,
                                       size_t *out,
                                       size_t len,
                                       size_t *written);

/**
 * Full JSON report for the model; `passed` receives the overall verdict.
 *
 * # Safety
 * `model` must be a live handle; `out` and `passed` must be valid.
 */
enum DfStatus df_model_report_json(const struct DfModel *model, char **out, bool *passed);

/**
 * Runs the full suite with the given seed.
 *
 * # Safety
 * `passed` must be valid.
 */
enum DfStatus df_verify_all(uint64_t seed, bool *passed);

/**
 * Solves `(∂x + α∂y) f = g` for `len` coefficients `g_{m[j], n[j]}`;
 * writes `f` at the same frequencies and the residual.
 *
 * # Safety
 * All arrays must hold `len` elements; `alpha` must be a valid C string;
 * `residual` must be valid.
 */
enum DfStatus df_solve_torus(const char *alpha,
                             const int64_t *m,
                             const int64_t *n,
                             const double *re,
                             const double *im,
                             size_t len,
                             bool subtract_mean,
                             double *out_re,
                             double *out_im,
                             double *residual);

/**
 * Translation length of the hyperbolic element `[[a, b], [c, d]]` and the
 * integral of `ω0` along its closed geodesic.
 *
 * # Safety
 * `length` and `integral` must be valid.
 */
enum DfStatus df_closed_geodesic_period(double a,
                                        double b,
                                        double c,
                                        double d,
                                        double *length,
                                        double *integral);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void df_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNFORMS_H */
