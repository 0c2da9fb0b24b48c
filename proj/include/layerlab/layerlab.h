#ifndef LAYERLAB_H
#define LAYERLAB_H

#include <stddef.h>

#if defined(LAYERLAB_BUILDING)
#define LAYERLAB_API __attribute__((visibility("default")))
#else
#define LAYERLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LL_OK = 0,
  LL_NON_REAL_PRINCIPAL_PART = 1,
  LL_BAD_MULTI_INDEX = 2,
  LL_NOT_ELLIPTIC = 3,
  LL_EVAL_AT_ORIGIN = 4,
  LL_UNSUPPORTED_FAMILY = 5,
  LL_BAD_SHAPE_PARAMS = 6,
  LL_NEEDS_AMBIENT_FORM = 7,
  LL_DEGENERATE_NODE_SET = 8,
  LL_NON_FINITE_INTEGRAND = 9,
  LL_MISSING_SPLIT = 10,
  LL_MISSING_SINGULARITY_DECLARATION = 11,
  LL_NON_FINITE_KERNEL_VALUE = 12,
  LL_UNSUPPORTED_DIMENSION = 13,
  LL_ROUGH_DENSITY_UNSUPPORTED = 14,
  LL_INVALID_CONFIG = 15,
  LL_IO = 16,
  LL_INVALID_ARGUMENT = 100,
  LL_INTERNAL = 101
} ll_status;

typedef enum { LL_SINGLE = 0, LL_DOUBLE = 1, LL_CONORMAL_ADJOINT = 2 } ll_layer_kind;

typedef struct ll_operator ll_operator;
typedef struct ll_surface ll_surface;
typedef struct ll_context ll_context;

/* Operators. JSON: {"n":2,"preset":"helmholtz","kappa":1} or
   {"n":2,"coeffs":[{"gamma":[2,0],"re":1,"im":0}, ...]}. */
LAYERLAB_API ll_status ll_operator_from_json(const char* json, ll_operator** out);
/* gammas holds count*n multi-index entries, values count (re, im) pairs. */
LAYERLAB_API ll_status ll_operator_create(int n, size_t count, const int* gammas, const double* values,
                                          ll_operator** out);
LAYERLAB_API void ll_operator_destroy(ll_operator* op);
LAYERLAB_API ll_status ll_operator_ellipticity(const ll_operator* op, double* min_eigenvalue);

/* Fundamental solution at x (length n). Complex results are interleaved (re, im):
   S writes 2 doubles, gradS 2n, hessS 2n^2 in row-major order. */
LAYERLAB_API ll_status ll_eval_S(const ll_operator* op, const double* x, double* out);
LAYERLAB_API ll_status ll_eval_gradS(const ll_operator* op, const double* x, double* out);
LAYERLAB_API ll_status ll_eval_hessS(const ll_operator* op, const double* x, double* out);

/* Surfaces. JSON: {"kind":"kite","N":256} or {"kind":"sphere","r":1,"level":3}. */
LAYERLAB_API ll_status ll_surface_from_json(const char* json, ll_surface** out);
LAYERLAB_API size_t ll_surface_node_count(const ll_surface* s);
/* Columns: index, x1, x2, x3, nu1, nu2, nu3, weight. */
LAYERLAB_API ll_status ll_surface_write_csv(const ll_surface* s, const char* path);
LAYERLAB_API void ll_surface_destroy(ll_surface* s);

/* Layer operators on nodal densities of length ll_surface_node_count. */
LAYERLAB_API ll_status ll_context_create(const ll_operator* op, const ll_surface* s, ll_context** out);
LAYERLAB_API void ll_context_destroy(ll_context* ctx);
LAYERLAB_API ll_status ll_apply(const ll_context* ctx, ll_layer_kind kind, const double* mu_re, const double* mu_im,
                                double* out_re, double* out_im);

/* Runs a named experiment and writes report.json and data/ below out_dir when
   out_dir is not NULL. *report_json, when requested, is freed with ll_string_free.
   Returns LL_OK even when verdicts fail; *all_pass reports them. */
LAYERLAB_API ll_status ll_run_experiment(const char* command, const char* config_json, const char* out_dir,
                                         int* all_pass, char** report_json);
LAYERLAB_API void ll_string_free(char* s);

/* Message of the last failing call on this thread. */
LAYERLAB_API const char* ll_last_error_message(void);
LAYERLAB_API const char* ll_status_string(ll_status status);

#ifdef __cplusplus
}
#endif

#endif
