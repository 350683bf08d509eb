/* gfkit - growth-fragmentation equation toolkit, C API.
 *
 * Opaque handles + status codes over the C++ core. All array arguments are
 * caller-owned contiguous buffers of length gfkit_grid_nodes(grid). Functions
 * return GFKIT_OK on success; on failure gfkit_last_error() carries a
 * thread-local message.
 */
#ifndef GFKIT_H
#define GFKIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GFKIT_API __declspec(dllexport)
#else
#define GFKIT_API __attribute__((visibility("default")))
#endif

typedef enum gfkit_status {
  GFKIT_OK = 0,
  GFKIT_CHECK_FAILED = 1,   /* a verification check did not pass */
  GFKIT_CONFIG_ERROR = 2,   /* bad config file, parameters or usage */
  GFKIT_NO_CONVERGENCE = 3, /* iteration exhausted max_steps */
  GFKIT_UNSTABLE = 4,       /* dt beyond the stability bound, or blow-up */
  GFKIT_INVALID_ARGUMENT = 5,
  GFKIT_IO_ERROR = 6,
  GFKIT_MISSING_DATA = 7
} gfkit_status;

GFKIT_API const char* gfkit_version(void);
GFKIT_API const char* gfkit_status_name(gfkit_status status);
GFKIT_API const char* gfkit_last_error(void);

/* ---- kernels ------------------------------------------------------- */

typedef struct gfkit_kernel gfkit_kernel;

/* type: "uniform" | "equal_mitosis" | "general_mitosis" | "homogeneous".
 * param is sigma for general_mitosis, alpha for homogeneous, ignored else. */
GFKIT_API gfkit_status gfkit_kernel_create(const char* type, double param,
                                           gfkit_kernel** out);
GFKIT_API void gfkit_kernel_free(gfkit_kernel* kernel);

GFKIT_API gfkit_status gfkit_kernel_fragment_count(const gfkit_kernel* kernel, double* k);
GFKIT_API gfkit_status gfkit_kernel_cumulative(const gfkit_kernel* kernel, double x,
                                               double y, double* out);
GFKIT_API gfkit_status gfkit_kernel_verify_moments(const gfkit_kernel* kernel, double y,
                                                   double tol, double* zeroth, double* first,
                                                   int* pass);
GFKIT_API gfkit_status gfkit_kernel_verify_beta_mass(const gfkit_kernel* kernel, double y,
                                                     double tol, double* mass, int* pass);

/* ---- grid and grid functions --------------------------------------- */

typedef struct gfkit_grid gfkit_grid;

GFKIT_API gfkit_status gfkit_grid_create(double x_max, int n_nodes, gfkit_grid** out);
GFKIT_API void gfkit_grid_free(gfkit_grid* grid);
GFKIT_API int gfkit_grid_nodes(const gfkit_grid* grid);
GFKIT_API double gfkit_grid_spacing(const gfkit_grid* grid);
GFKIT_API double gfkit_grid_x_max(const gfkit_grid* grid);

GFKIT_API gfkit_status gfkit_integrate(const gfkit_grid* grid, const double* f, double* out);
GFKIT_API gfkit_status gfkit_interpolate(const gfkit_grid* grid, const double* f, double x,
                                         double* out);
GFKIT_API gfkit_status gfkit_antiderivative(const gfkit_grid* grid, const double* f,
                                            double* out);
GFKIT_API gfkit_status gfkit_differentiate(const gfkit_grid* grid, const double* f,
                                           double* out);

GFKIT_API gfkit_status gfkit_apply_gain(const gfkit_kernel* kernel, const gfkit_grid* grid,
                                        const double* n, double B, double* out);
GFKIT_API gfkit_status gfkit_apply_beta(const gfkit_kernel* kernel, const gfkit_grid* grid,
                                        const double* m, double B, double* out);

/* ---- steady states and functionals ---------------------------------- */

GFKIT_API gfkit_status gfkit_cfl_dt(const gfkit_grid* grid, double tau_max,
                                    const gfkit_kernel* kernel, double B, double* out);

GFKIT_API gfkit_status gfkit_steady_explicit_uniform(const gfkit_grid* grid, double B,
                                                     double* values, double* residual_l1);

/* dt <= 0 selects the CFL timestep. */
GFKIT_API gfkit_status gfkit_steady_numeric(const gfkit_kernel* kernel,
                                            const gfkit_grid* grid, double B, double dt,
                                            double tol, long max_steps, double* values,
                                            double* residual_l1, long* iterations);

GFKIT_API gfkit_status gfkit_steady_residual(const gfkit_kernel* kernel,
                                             const gfkit_grid* grid, double B,
                                             const double* N, double* out);

/* Semi-norm of n0 against the steady profile N (unit integral); also returns
 * the two parts and the W^{1,1}-type upper bound. Null out-pointers are
 * skipped. */
GFKIT_API gfkit_status gfkit_seminorm(const gfkit_kernel* kernel, const gfkit_grid* grid,
                                      double B, const double* n0, const double* N,
                                      double* seminorm, double* term_derivative_part,
                                      double* term_m_l1_part, double* w11_bound);

/* ---- config-driven commands ----------------------------------------- */

typedef struct gfkit_config gfkit_config;

GFKIT_API gfkit_status gfkit_config_load(const char* path, gfkit_config** out);
GFKIT_API gfkit_status gfkit_config_parse(const char* json_text, gfkit_config** out);
GFKIT_API void gfkit_config_free(gfkit_config* config);

/* Writes the steady profile as x,value CSV plus a JSON sidecar
 * {residual_l1, iterations, method} at sidecar_json. */
GFKIT_API gfkit_status gfkit_run_steady(const gfkit_config* config, const char* out_csv,
                                        const char* sidecar_json);

/* Writes diagnostics.csv, snapshot CSVs and manifest.json under out_dir. */
GFKIT_API gfkit_status gfkit_run_evolve(const gfkit_config* config, const char* out_dir);

GFKIT_API gfkit_status gfkit_fit_rate_csv(const char* diagnostics_csv, const char* column,
                                          double t_lo, double t_hi, double* lambda,
                                          double* intercept, double* r_squared,
                                          int* floor_hit);

/* phi: "sin" or "tent". */
GFKIT_API gfkit_status gfkit_poincare_counterexample(const gfkit_config* config,
                                                     const char* phi, double* d2,
                                                     double* variance, double* ratio);

/* Runs the certificate suite. checks_csv is a comma-separated subset of check
 * names (NULL = all); slack <= 0 uses the config value. *report receives a
 * malloc'd JSON document (free with gfkit_string_free). Returns
 * GFKIT_CHECK_FAILED when any check fails. */
GFKIT_API gfkit_status gfkit_verify(const gfkit_config* config, double slack,
                                    const char* checks_csv, char** report);

GFKIT_API void gfkit_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GFKIT_H */
