#ifndef XSCAT_H
#define XSCAT_H

/*
 * C API for the xscat library: weighted geodesic X-ray transforms of
 * symmetric tensor fields on the sphere, transport-equation symbol solvers,
 * multi-energy separation, an order-by-order reconstruction pipeline, and a
 * formal boundary-expansion engine for the radial model.
 *
 * All entry points return a status code (XSCAT_OK on success) and report
 * details through xscat_last_error on the context.  Strings returned through
 * char** outputs are heap-allocated; release them with xscat_string_free.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the CLI exits with the same values. */
enum {
  XSCAT_OK = 0,
  XSCAT_ERR_INTERNAL = 1,
  XSCAT_ERR_VALIDATION = 2,
  XSCAT_ERR_UNDERDETERMINED = 3,
  XSCAT_ERR_RANK_DEFICIENT = 4,
  XSCAT_ERR_THRESHOLD = 5,
  XSCAT_ERR_IO = 6
};

typedef struct xscat_context xscat_context;

const char* xscat_version(void);

int xscat_context_create(xscat_context** out);
void xscat_context_destroy(xscat_context* ctx);

/* Message for the most recent failing call on this context ("" if none). */
const char* xscat_last_error(const xscat_context* ctx);

/* Load the run configuration (JSON) from a file or from a string. */
int xscat_config_load_file(xscat_context* ctx, const char* path);
int xscat_config_load_json(xscat_context* ctx, const char* json_text);

/* Override the worker-thread count of the loaded configuration. */
int xscat_set_threads(xscat_context* ctx, int threads);

/*
 * Pipeline commands.  Each reads/writes files under out_dir and, when
 * report_json is non-NULL, stores the command's JSON report there.
 * Reruns with the same configuration and inputs produce byte-identical
 * output files.
 */
int xscat_run_gen(xscat_context* ctx, const char* out_dir, char** report_json);
int xscat_run_forward(xscat_context* ctx, const char* out_dir, char** report_json);
int xscat_run_invert(xscat_context* ctx, const char* out_dir, char** report_json);
int xscat_run_check(xscat_context* ctx, const char* out_dir, char** report_json);
int xscat_run_expand(xscat_context* ctx, const char* out_dir, char** report_json);

void xscat_string_free(char* s);

/*
 * Direct numeric entry points.
 */

/* Weighted X-ray transform of a tensor field (tensor JSON document) over the
 * arc (omega, v), weight exponent j. */
int xscat_weighted_xray(xscat_context* ctx, const char* tensor_json, const double* omega,
                        const double* v, int n, int j, int quadrature_order, double* re,
                        double* im);

/* Fit values[i] = sum_d coeff[d] lambda[i]^d for d = 0..max_degree; coeff_re
 * and coeff_im must hold max_degree+1 entries. */
int xscat_separate_degrees(xscat_context* ctx, const double* lambdas, int count,
                           const double* values_re, const double* values_im, int max_degree,
                           double* coeff_re, double* coeff_im, double* condition_number);

/* Boundary-expansion extraction constant C_alpha for Delta^k - lambda^{2k}
 * (lambda = lambda_num / lambda_den), as a complex double. */
int xscat_c_alpha(xscat_context* ctx, int n, int k, long lambda_num, long lambda_den,
                  int alpha, double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
