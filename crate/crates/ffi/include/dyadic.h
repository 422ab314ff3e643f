#ifndef DYADIC_H
#define DYADIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum DyadicStatus {
  DYADIC_STATUS_OK = 0,
  DYADIC_STATUS_DOMAIN = 1,
  DYADIC_STATUS_POLE = 2,
  DYADIC_STATUS_CUT_PROXIMITY = 3,
  DYADIC_STATUS_OUT_OF_RANGE = 4,
  DYADIC_STATUS_NON_CONVERGENCE = 5,
  DYADIC_STATUS_NOT_HERMITIAN = 6,
  DYADIC_STATUS_NON_POSITIVE_SPECTRUM = 7,
  DYADIC_STATUS_IO = 8,
  DYADIC_STATUS_PARSE = 9,
  DYADIC_STATUS_NULL_POINTER = 10,
  DYADIC_STATUS_PANIC = 11,
} DyadicStatus;

// Opaque Hermitian operator with its eigendecomposition.
typedef struct DyadicOperator DyadicOperator;

// Opaque coefficient table for one Bessel order.
typedef struct DyadicTable DyadicTable;

typedef struct DyadicComplex {
  double re;
  double im;
} DyadicComplex;

// Value of an evaluation with its error estimate and plan summary.
typedef struct DyadicResult {
  struct DyadicComplex value;
  double error_estimate;
  // Factorial-series terms summed, closure terms included.
  size_t terms_total;
  // Dyadic levels K of the plan.
  size_t levels;
} DyadicResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length.
//
// # Safety
// `buf` must be valid for `len` bytes or null.
size_t dyadic_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *dyadic_version(void);

// e^{-x}Ei⁺(x).
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_ei_stokes(struct DyadicComplex x, double tol, struct DyadicResult *out);

// e^{-x}Ei⁻(x).
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_ei_stokes_minus(struct DyadicComplex x,
                                         double tol,
                                         struct DyadicResult *out);

// e^{x}E₁(x).
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_ei_left(struct DyadicComplex x, double tol, struct DyadicResult *out);

// Ψ(x+1).
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_psi(struct DyadicComplex x, double tol, struct DyadicResult *out);

// Γ(s, x) for s < 1 not an integer.
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_incomplete_gamma(double s,
                                          struct DyadicComplex x,
                                          double tol,
                                          struct DyadicResult *out);

// erfc(√x) for x > 0.
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_erfc(double x, double tol, struct DyadicResult *out);

// Ai(x) for real x past the turning region.
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_airy_ai(double x, double tol, struct DyadicResult *out);

// K_ν(z) for real z, |ν| ≤ 5.
//
// # Safety
// `out` must be valid for writes.
enum DyadicStatus dyadic_bessel_k(double nu, double z, double tol, struct DyadicResult *out);

// Builds (or fetches from the process cache) the coefficient table of order ν.
//
// # Safety
// `out` must be valid for writes; the handle must be released with
// [`dyadic_table_free`].
enum DyadicStatus dyadic_table_new(double nu, struct DyadicTable **out);

// # Safety
// `table` must come from [`dyadic_table_new`] and not be used afterwards.
void dyadic_table_free(struct DyadicTable *table);

// Order ν of a table.
//
// # Safety
// `table` must be a live handle.
double dyadic_table_nu(const struct DyadicTable *table);

// The Borel sum h_ν(x) for Re x > 0 from a table.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum DyadicStatus dyadic_table_h(const struct DyadicTable *table,
                                 struct DyadicComplex x,
                                 double tol,
                                 struct DyadicResult *out);

// Creates an operator from an n×n Hermitian matrix given as 2n² doubles.
//
// # Safety
// `entries` must hold 2n² doubles; `out` must be valid for writes. Release
// the handle with [`dyadic_operator_free`].
enum DyadicStatus dyadic_operator_new(size_t n, const double *entries, struct DyadicOperator **out);

// # Safety
// `op` must come from [`dyadic_operator_new`] and not be used afterwards.
void dyadic_operator_free(struct DyadicOperator *op);

// Dimension of an operator (0 for null).
//
// # Safety
// `op` must be a live handle or null.
size_t dyadic_operator_dim(const struct DyadicOperator *op);

// Eigenvalues in ascending order into `out` (n doubles).
//
// # Safety
// `op` must be a live handle and `out` valid for n doubles.
enum DyadicStatus dyadic_operator_eigenvalues(const struct DyadicOperator *op, double *out);

// Dyadic series for (A − iλ)⁻¹v with K levels; v and out hold 2n doubles.
//
// # Safety
// `op` must be a live handle; `v` and `out` valid for 2n doubles.
enum DyadicStatus dyadic_operator_resolvent(const struct DyadicOperator *op,
                                            double lambda,
                                            size_t levels,
                                            const double *v,
                                            double *out);

// Dyadic series for A⁻¹ (positive spectrum) into `out` (2n² doubles).
//
// # Safety
// `op` must be a live handle and `out` valid for 2n² doubles.
enum DyadicStatus dyadic_operator_inverse(const struct DyadicOperator *op,
                                          size_t levels,
                                          double *out);

// Dyadic series for πA^{s−1} into `out` (2n² doubles).
//
// # Safety
// `op` must be a live handle and `out` valid for 2n² doubles.
enum DyadicStatus dyadic_operator_fractional_power(const struct DyadicOperator *op,
                                                   double s,
                                                   size_t levels,
                                                   double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYADIC_H */
