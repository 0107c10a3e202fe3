#ifndef PPOLY_H
#define PPOLY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of an FFI call.
 */
typedef enum PpolyStatus {
  PPOLY_STATUS_OK = 0,
  PPOLY_STATUS_NULL_POINTER = 1,
  PPOLY_STATUS_INVALID_ARGUMENT = 2,
  PPOLY_STATUS_PRECISION = 3,
  PPOLY_STATUS_TRUNCATION = 4,
  PPOLY_STATUS_NUMERICAL = 5,
  PPOLY_STATUS_IO = 6,
  PPOLY_STATUS_PANIC = 7,
} PpolyStatus;

/*
 Verdict of a zero report or suite.
 */
typedef enum PpolyVerdict {
  PPOLY_VERDICT_PASS = 0,
  PPOLY_VERDICT_FAIL = 1,
  PPOLY_VERDICT_INCONCLUSIVE = 2,
} PpolyVerdict;

/*
 Working precision.
 */
typedef struct PpolyContext PpolyContext;

/*
 A q-expansion.
 */
typedef struct PpolyForm PpolyForm;

/*
 A Laurent polynomial with complex coefficients.
 */
typedef struct PpolyPoly PpolyPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failing call on this thread, or NULL.
 The pointer stays valid until the next failing call.
 */
const char *ppoly_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must come from this library and not have been freed.
 */
void ppoly_string_free(char *s);

/*
 Creates a context working at `bits` bits.

 # Safety
 `out` must be a valid pointer.
 */
enum PpolyStatus ppoly_context_new(uint32_t bits, struct PpolyContext **out);

/*
 # Safety
 `ctx` must come from [`ppoly_context_new`] and not have been freed.
 */
void ppoly_context_free(struct PpolyContext *ctx);

/*
 The `index`-th normalized Hecke eigenform of weight `k`, ordered by `a_2`.

 # Safety
 `ctx` must be a live context and `out` a valid pointer.
 */
enum PpolyStatus ppoly_form_eigen(const struct PpolyContext *ctx,
                                  uint32_t k,
                                  size_t index,
                                  struct PpolyForm **out);

/*
 The Eisenstein series `E_k` with constant term `-B_k/(2k)`.

 # Safety
 `ctx` must be a live context and `out` a valid pointer.
 */
enum PpolyStatus ppoly_form_eisenstein(const struct PpolyContext *ctx,
                                       uint32_t k,
                                       struct PpolyForm **out);

/*
 # Safety
 `form` must come from this library and not have been freed.
 */
void ppoly_form_free(struct PpolyForm *form);

/*
 Weight of a form.

 # Safety
 `form` must be a live handle.
 */
uint32_t ppoly_form_weight(const struct PpolyForm *form);

/*
 `Lambda_f^{(m)}(s)` for real `s`, rounded to doubles.

 # Safety
 Handles must be live; output pointers must be valid.
 */
enum PpolyStatus ppoly_lvalue(const struct PpolyContext *ctx,
                              const struct PpolyForm *form,
                              double s,
                              uint32_t m,
                              double *re,
                              double *im,
                              double *err);

/*
 Builds a polynomial by family name (`r`, `q`, `sigma-ss`, `zagier-tilde`,
 `brown-closed`, `ramanujan`, `lalin-smyth`, `p-m`, `correction-p`).
 `form` may be NULL for families that do not need one. `parity` is NULL,
 `"odd"` or `"even"`.

 # Safety
 Handles must be live or NULL as described; strings NUL-terminated.
 */
enum PpolyStatus ppoly_poly_build(const struct PpolyContext *ctx,
                                  const char *family,
                                  const struct PpolyForm *form,
                                  uint32_t k,
                                  uint32_t m,
                                  const char *parity,
                                  struct PpolyPoly **out);

/*
 # Safety
 `poly` must come from this library and not have been freed.
 */
void ppoly_poly_free(struct PpolyPoly *poly);

/*
 Smallest and largest stored exponents. A zero polynomial gives `0, -1`.

 # Safety
 `poly` must be live; outputs valid.
 */
enum PpolyStatus ppoly_poly_exponents(const struct PpolyPoly *poly, int64_t *lo, int64_t *hi);

/*
 Coefficient of `z^e` rounded to doubles.

 # Safety
 `poly` must be live; outputs valid.
 */
enum PpolyStatus ppoly_poly_coeff(const struct PpolyPoly *poly, int64_t e, double *re, double *im);

/*
 Full-precision JSON of a polynomial.

 # Safety
 `poly` must be live; `out` valid.
 */
enum PpolyStatus ppoly_poly_json(const struct PpolyPoly *poly, char **out);

/*
 Roots of `poly` and their unimodularity verdict. `policy` is `"none"`,
 `"exclude-reals"` or `"exclude-quadruple-and-zero"`. The report is
 written as JSON to `out`.

 # Safety
 Handles must be live; strings NUL-terminated; outputs valid.
 */
enum PpolyStatus ppoly_zeros(const struct PpolyContext *ctx,
                             const struct PpolyPoly *poly,
                             const char *policy,
                             double pass_tol,
                             double fail_tol,
                             enum PpolyVerdict *verdict,
                             char **out);

/*
 Runs a verification suite with its default grid at `bits` bits
 (0 keeps the suite default). The report is written as JSON to `out`.

 # Safety
 `suite` NUL-terminated; outputs valid.
 */
enum PpolyStatus ppoly_verify(const char *suite,
                              uint32_t bits,
                              uint32_t k_max,
                              enum PpolyVerdict *verdict,
                              char **out);

/*
 Library version as a static string.
 */
const char *ppoly_version(void);

/*
 Numeric value of a status, for bindings without enum support.
 */
int ppoly_status_code(enum PpolyStatus s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPOLY_H */
