/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the ffgsv library: expected characteristic polynomials,
 * the Hermite / Laguerre / generalized-singular-value evolution operators,
 * root flows and the Monte Carlo experiment runner.
 *
 * Every function returning ffgsv_status leaves a message for
 * ffgsv_last_error() (thread-local) on failure. Handles are opaque and owned
 * by the caller; release them with the matching *_free. Strings returned
 * through char** are released with ffgsv_string_free.
 *
 * Theta values are passed as text ("1/3", "0.25", "1e-8") so that exact
 * polynomials stay exact.
 */
#ifndef FFGSV_H
#define FFGSV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FFGSV_API __declspec(dllexport)
#else
#define FFGSV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ffgsv_status {
  FFGSV_OK = 0,
  FFGSV_E_INVALID_ARGUMENT = 1,
  FFGSV_E_PARSE = 2,
  FFGSV_E_DEGREE = 3,
  FFGSV_E_SHAPE = 4,
  FFGSV_E_MODE = 5, /* exact operation on complex or float input */
  FFGSV_E_DEGENERATE = 6,
  FFGSV_E_IO = 7,
  FFGSV_E_INTERNAL = 8,
  FFGSV_E_BUFFER = 9 /* output buffer too small; count holds the size */
} ffgsv_status;

typedef struct ffgsv_poly ffgsv_poly;
typedef struct ffgsv_matrix ffgsv_matrix;
typedef struct ffgsv_trace ffgsv_trace;
typedef struct ffgsv_experiment_spec ffgsv_experiment_spec;
typedef struct ffgsv_experiment ffgsv_experiment;

FFGSV_API const char* ffgsv_version(void);
FFGSV_API const char* ffgsv_last_error(void);
FFGSV_API void ffgsv_string_free(char* s);

/* ---- polynomials ---------------------------------------------------- */

/* Polynomial text: one "coeff e1 [e2 [e3]]" line per monomial. arity is
 * 1, 2 or 3 and must match the exponent count (an empty text is zero). */
FFGSV_API ffgsv_status ffgsv_poly_parse(const char* text, int arity,
                                        ffgsv_poly** out);
FFGSV_API ffgsv_status ffgsv_poly_format(const ffgsv_poly* p, char** text);
/* Human-readable form, e.g. "x^2 - 2". */
FFGSV_API ffgsv_status ffgsv_poly_to_string(const ffgsv_poly* p, char** text);
FFGSV_API ffgsv_status ffgsv_poly_to_float(const ffgsv_poly* p,
                                           ffgsv_poly** out);
FFGSV_API int ffgsv_poly_arity(const ffgsv_poly* p);
FFGSV_API int ffgsv_poly_is_exact(const ffgsv_poly* p);
/* Degree in variable var (0-based); -1 for the zero polynomial. */
FFGSV_API int ffgsv_poly_degree(const ffgsv_poly* p, int var);
/* exps has arity entries. */
FFGSV_API ffgsv_status ffgsv_poly_coeff(const ffgsv_poly* p, const int* exps,
                                        double* out);
FFGSV_API void ffgsv_poly_free(ffgsv_poly* p);

/* ---- matrices ------------------------------------------------------- */

/* Matrix text: "rows cols" then the entries; decimals, p/q, or complex
 * re+imi. */
FFGSV_API ffgsv_status ffgsv_matrix_parse(const char* text,
                                          ffgsv_matrix** out);
FFGSV_API size_t ffgsv_matrix_rows(const ffgsv_matrix* m);
FFGSV_API size_t ffgsv_matrix_cols(const ffgsv_matrix* m);
FFGSV_API int ffgsv_matrix_is_complex(const ffgsv_matrix* m);
FFGSV_API void ffgsv_matrix_free(ffgsv_matrix* m);

/* ---- characteristic polynomials (exact != 0 keeps rationals) -------- */

/* det(xI - A), A square (Hermitian when complex). */
FFGSV_API ffgsv_status ffgsv_charpoly(const ffgsv_matrix* a, int exact,
                                      ffgsv_poly** out);
/* y^(n-m) det(xyI - C C^*), C m x n with m <= n. */
FFGSV_API ffgsv_status ffgsv_singular_charpoly(const ffgsv_matrix* c,
                                               int exact, ffgsv_poly** out);
/* det(xI + y A^*A + z B^*B), A s x k, B t x k. */
FFGSV_API ffgsv_status ffgsv_tri_charpoly(const ffgsv_matrix* a,
                                          const ffgsv_matrix* b, int exact,
                                          ffgsv_poly** out);
/* Squared generalized singular values, ascending. */
FFGSV_API ffgsv_status ffgsv_gsv_squares(const ffgsv_matrix* a,
                                         const ffgsv_matrix* b,
                                         double* values, size_t capacity,
                                         size_t* count, int* deficiency);

/* ---- operators ------------------------------------------------------ */

FFGSV_API ffgsv_status ffgsv_additive_convolve(const ffgsv_poly* p,
                                               const ffgsv_poly* q, int n,
                                               ffgsv_poly** out);
FFGSV_API ffgsv_status ffgsv_rect_convolve(const ffgsv_poly* p,
                                           const ffgsv_poly* q, int m, int n,
                                           ffgsv_poly** out);
FFGSV_API ffgsv_status ffgsv_hermite_evolve(const ffgsv_poly* p,
                                            const char* theta,
                                            ffgsv_poly** out);
FFGSV_API ffgsv_status ffgsv_laguerre_evolve(const ffgsv_poly* p,
                                             const char* theta,
                                             ffgsv_poly** out);
FFGSV_API ffgsv_status ffgsv_gsvd_evolve(const ffgsv_poly* p,
                                         const char* theta, int k, int s,
                                         int t, ffgsv_poly** out);

typedef enum ffgsv_family {
  FFGSV_FAMILY_HERMITE = 0,  /* a = n */
  FFGSV_FAMILY_LAGUERRE = 1, /* a = s, b = k */
  FFGSV_FAMILY_JACOBI = 2    /* a = s, b = t, c = k */
} ffgsv_family;

FFGSV_API ffgsv_status ffgsv_classical(ffgsv_family family, int a, int b,
                                       int c, ffgsv_poly** out);

/* Real roots of a univariate polynomial with multiplicity, ascending.
 * Functions filling a double buffer report the size through count; a NULL
 * buffer with capacity 0 is a size query. */
FFGSV_API ffgsv_status ffgsv_real_roots(const ffgsv_poly* p, double* roots,
                                        size_t capacity, size_t* count);

/* ---- root flows ----------------------------------------------------- */

typedef enum ffgsv_model {
  FFGSV_MODEL_HERMITE = 0,
  FFGSV_MODEL_LAGUERRE = 1, /* params: m, n */
  FFGSV_MODEL_GSVD = 2,     /* params: k, s, t */
  FFGSV_MODEL_JACOBI = 3    /* drift only; params: -, s, t */
} ffgsv_model;

typedef enum ffgsv_specialization {
  FFGSV_SPEC_GSVD = 0,    /* p(0, w - 1, w) */
  FFGSV_SPEC_SINGULAR = 1 /* p(x, 0, -1) */
} ffgsv_specialization;

/* Roots of the evolved polynomial at each theta (text, increasing). Hermite
 * takes a univariate p, Laguerre a bivariate p (roots at y = 1), GSVD a
 * trivariate p with params k, s, t. */
FFGSV_API ffgsv_status ffgsv_evolve_operator(const ffgsv_poly* p,
                                             ffgsv_model model,
                                             const int* params,
                                             ffgsv_specialization spec,
                                             const char* const* thetas,
                                             size_t n_thetas,
                                             ffgsv_trace** out);
/* RK4 integration of the drift from the roots of p at theta0. Needs
 * distinct starting roots (FFGSV_E_DEGENERATE otherwise); a mid-run
 * collision ends the trace early with an abort reason. */
FFGSV_API ffgsv_status ffgsv_evolve_ode(const ffgsv_poly* p, ffgsv_model model,
                                        const int* params, double theta0,
                                        double theta1, int steps,
                                        ffgsv_trace** out);
FFGSV_API size_t ffgsv_trace_size(const ffgsv_trace* t);
FFGSV_API double ffgsv_trace_theta(const ffgsv_trace* t, size_t i);
FFGSV_API ffgsv_status ffgsv_trace_roots(const ffgsv_trace* t, size_t i,
                                         double* roots, size_t capacity,
                                         size_t* count);
/* "operator" or "ode". */
FFGSV_API const char* ffgsv_trace_method(const ffgsv_trace* t);
/* Empty unless an ODE run stopped early. */
FFGSV_API const char* ffgsv_trace_abort_reason(const ffgsv_trace* t);
FFGSV_API void ffgsv_trace_free(ffgsv_trace* t);

/* Drift velocities at the given roots. GSVD needs the trivariate p (at
 * theta 0) and evaluates at the given theta; other models ignore p and
 * theta. */
FFGSV_API ffgsv_status ffgsv_drift(ffgsv_model model, const int* params,
                                   const ffgsv_poly* p, double theta,
                                   const double* roots, size_t n,
                                   double* velocities);

/* ---- Monte Carlo experiment ----------------------------------------- */

typedef struct ffgsv_mc_config {
  long trials;
  int steps;
  double sigma2;
  int beta;        /* 1 real, 2 complex */
  int rademacher;  /* 0 gaussian, 1 rademacher */
  uint64_t master_seed;
  int shared_increments;
  int threads; /* 0: hardware concurrency */
} ffgsv_mc_config;

/* The built-in configuration text. */
FFGSV_API ffgsv_status ffgsv_experiment_default_config(char** text);
/* NULL or "" gives the built-in configuration. */
FFGSV_API ffgsv_status ffgsv_experiment_spec_parse(const char* text,
                                                   ffgsv_experiment_spec** out);
FFGSV_API ffgsv_status ffgsv_experiment_spec_mc(const ffgsv_experiment_spec* s,
                                                ffgsv_mc_config* out);
/* "paper-display" or "values-consistent". */
FFGSV_API ffgsv_status ffgsv_experiment_spec_set_convention(
    ffgsv_experiment_spec* s, const char* convention);
FFGSV_API const char* ffgsv_experiment_spec_convention(
    const ffgsv_experiment_spec* s);
FFGSV_API void ffgsv_experiment_spec_free(ffgsv_experiment_spec* s);

FFGSV_API ffgsv_status ffgsv_experiment_run(const ffgsv_experiment_spec* s,
                                            const ffgsv_mc_config* mc,
                                            ffgsv_experiment** out);
/* Writes paths.csv, moments.csv, horizon.csv and samples.csv into dir
 * (which must exist). */
FFGSV_API ffgsv_status ffgsv_experiment_write_csv(const ffgsv_experiment* e,
                                                  const char* dir);
/* "key = value" lines describing the run: convention, normalization
 * constants, starting values under both conventions, dropped counts. */
FFGSV_API ffgsv_status ffgsv_experiment_summary(const ffgsv_experiment* e,
                                                char** text);
FFGSV_API void ffgsv_experiment_free(ffgsv_experiment* e);

#ifdef __cplusplus
}
#endif

#endif /* FFGSV_H */
