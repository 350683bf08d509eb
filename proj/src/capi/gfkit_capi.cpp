#include "gfkit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "../core/config.hpp"
#include "../core/diagnostics.hpp"
#include "../core/errors.hpp"
#include "../core/runner.hpp"

namespace {

thread_local std::string g_last_error;

gfkit_status fail(gfkit_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Maps the core exception taxonomy onto the status codes the CLI exposes as
// exit codes.
template <typename Fn>
gfkit_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GFKIT_OK;
  } catch (const gfkit::ConfigError& e) {
    return fail(GFKIT_CONFIG_ERROR, e.what());
  } catch (const gfkit::ConvergenceError& e) {
    return fail(GFKIT_NO_CONVERGENCE, e.what());
  } catch (const gfkit::StabilityError& e) {
    return fail(GFKIT_UNSTABLE, e.what());
  } catch (const gfkit::IoError& e) {
    return fail(GFKIT_IO_ERROR, e.what());
  } catch (const gfkit::MissingDataError& e) {
    return fail(GFKIT_MISSING_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GFKIT_INVALID_ARGUMENT, "out of memory");
  } catch (const std::exception& e) {
    return fail(GFKIT_INVALID_ARGUMENT, e.what());
  }
}

gfkit::GridFunction wrap(const gfkit::Grid& grid, const double* values) {
  gfkit::GridFunction f = gfkit::make_grid_function(grid);
  std::memcpy(f.values.data(), values, sizeof(double) * f.values.size());
  return f;
}

void unwrap(const gfkit::GridFunction& f, double* out) {
  std::memcpy(out, f.values.data(), sizeof(double) * f.values.size());
}

}  // namespace

struct gfkit_kernel {
  gfkit::Kernel k;
};
struct gfkit_grid {
  gfkit::Grid g;
};
struct gfkit_config {
  gfkit::AppConfig c;
};

extern "C" {

const char* gfkit_version(void) { return gfkit::kVersion; }

const char* gfkit_status_name(gfkit_status status) {
  switch (status) {
    case GFKIT_OK: return "ok";
    case GFKIT_CHECK_FAILED: return "check_failed";
    case GFKIT_CONFIG_ERROR: return "config_error";
    case GFKIT_NO_CONVERGENCE: return "no_convergence";
    case GFKIT_UNSTABLE: return "unstable";
    case GFKIT_INVALID_ARGUMENT: return "invalid_argument";
    case GFKIT_IO_ERROR: return "io_error";
    case GFKIT_MISSING_DATA: return "missing_data";
  }
  return "unknown";
}

const char* gfkit_last_error(void) { return g_last_error.c_str(); }

gfkit_status gfkit_kernel_create(const char* type, double param, gfkit_kernel** out) {
  if (!type || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new gfkit_kernel{gfkit::kernel_from_name(type, param, param)};
  });
}

void gfkit_kernel_free(gfkit_kernel* kernel) { delete kernel; }

gfkit_status gfkit_kernel_fragment_count(const gfkit_kernel* kernel, double* k) {
  if (!kernel || !k) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *k = kernel->k.fragment_count(); });
}

gfkit_status gfkit_kernel_cumulative(const gfkit_kernel* kernel, double x, double y,
                                     double* out) {
  if (!kernel || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = kernel->k.cumulative(x, y); });
}

gfkit_status gfkit_kernel_verify_moments(const gfkit_kernel* kernel, double y, double tol,
                                         double* zeroth, double* first, int* pass) {
  if (!kernel) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::MomentReport r = kernel->k.verify_moments(y, tol);
    if (zeroth) *zeroth = r.zeroth;
    if (first) *first = r.first;
    if (pass) *pass = r.pass ? 1 : 0;
  });
}

gfkit_status gfkit_kernel_verify_beta_mass(const gfkit_kernel* kernel, double y, double tol,
                                           double* mass, int* pass) {
  if (!kernel) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::BetaMassReport r = kernel->k.verify_beta_mass(y, tol);
    if (mass) *mass = r.mass;
    if (pass) *pass = r.pass ? 1 : 0;
  });
}

gfkit_status gfkit_grid_create(double x_max, int n_nodes, gfkit_grid** out) {
  if (!out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new gfkit_grid{gfkit::Grid(x_max, n_nodes)}; });
}

void gfkit_grid_free(gfkit_grid* grid) { delete grid; }

int gfkit_grid_nodes(const gfkit_grid* grid) { return grid ? grid->g.n_nodes() : 0; }
double gfkit_grid_spacing(const gfkit_grid* grid) { return grid ? grid->g.spacing() : 0.0; }
double gfkit_grid_x_max(const gfkit_grid* grid) { return grid ? grid->g.x_max() : 0.0; }

gfkit_status gfkit_integrate(const gfkit_grid* grid, const double* f, double* out) {
  if (!grid || !f || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = gfkit::integrate(wrap(grid->g, f)); });
}

gfkit_status gfkit_interpolate(const gfkit_grid* grid, const double* f, double x,
                               double* out) {
  if (!grid || !f || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = gfkit::interpolate(wrap(grid->g, f), x); });
}

gfkit_status gfkit_antiderivative(const gfkit_grid* grid, const double* f, double* out) {
  if (!grid || !f || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { unwrap(gfkit::antiderivative(wrap(grid->g, f)), out); });
}

gfkit_status gfkit_differentiate(const gfkit_grid* grid, const double* f, double* out) {
  if (!grid || !f || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { unwrap(gfkit::differentiate(wrap(grid->g, f)), out); });
}

gfkit_status gfkit_apply_gain(const gfkit_kernel* kernel, const gfkit_grid* grid,
                              const double* n, double B, double* out) {
  if (!kernel || !grid || !n || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { unwrap(kernel->k.apply_gain(wrap(grid->g, n), B), out); });
}

gfkit_status gfkit_apply_beta(const gfkit_kernel* kernel, const gfkit_grid* grid,
                              const double* m, double B, double* out) {
  if (!kernel || !grid || !m || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { unwrap(kernel->k.apply_beta(wrap(grid->g, m), B), out); });
}

gfkit_status gfkit_cfl_dt(const gfkit_grid* grid, double tau_max, const gfkit_kernel* kernel,
                          double B, double* out) {
  if (!grid || !kernel || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = gfkit::cfl_dt(grid->g, tau_max, kernel->k, B); });
}

gfkit_status gfkit_steady_explicit_uniform(const gfkit_grid* grid, double B, double* values,
                                           double* residual_l1) {
  if (!grid || !values) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::SteadyState st = gfkit::steady_explicit_uniform(B, grid->g);
    unwrap(st.density.f, values);
    if (residual_l1) *residual_l1 = st.residual_l1;
  });
}

gfkit_status gfkit_steady_numeric(const gfkit_kernel* kernel, const gfkit_grid* grid,
                                  double B, double dt, double tol, long max_steps,
                                  double* values, double* residual_l1, long* iterations) {
  if (!kernel || !grid || !values) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::SteadyOptions opts{dt, tol, max_steps};
    gfkit::SteadyState st = gfkit::steady_numeric(kernel->k, B, grid->g, opts);
    unwrap(st.density.f, values);
    if (residual_l1) *residual_l1 = st.residual_l1;
    if (iterations) *iterations = st.iterations;
  });
}

gfkit_status gfkit_steady_residual(const gfkit_kernel* kernel, const gfkit_grid* grid,
                                   double B, const double* N, double* out) {
  if (!kernel || !grid || !N || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = gfkit::steady_residual(kernel->k, B, wrap(grid->g, N)); });
}

gfkit_status gfkit_seminorm(const gfkit_kernel* kernel, const gfkit_grid* grid, double B,
                            const double* n0, const double* N, double* seminorm,
                            double* term_derivative_part, double* term_m_l1_part,
                            double* w11_bound) {
  if (!kernel || !grid || !n0 || !N) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::Density dens = gfkit::make_density(wrap(grid->g, N));
    gfkit::SemiNormReport r = gfkit::seminorm(wrap(grid->g, n0), dens, kernel->k, B);
    if (seminorm) *seminorm = r.seminorm;
    if (term_derivative_part) *term_derivative_part = r.term_derivative_part;
    if (term_m_l1_part) *term_m_l1_part = r.term_m_l1_part;
    if (w11_bound) *w11_bound = r.w11_bound;
  });
}

gfkit_status gfkit_config_load(const char* path, gfkit_config** out) {
  if (!path || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new gfkit_config{gfkit::load_config(path)}; });
}

gfkit_status gfkit_config_parse(const char* json_text, gfkit_config** out) {
  if (!json_text || !out) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new gfkit_config{gfkit::parse_config(json_text)}; });
}

void gfkit_config_free(gfkit_config* config) { delete config; }

gfkit_status gfkit_run_steady(const gfkit_config* config, const char* out_csv,
                              const char* sidecar_json) {
  if (!config || !out_csv || !sidecar_json)
    return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { gfkit::run_steady_command(config->c, out_csv, sidecar_json); });
}

gfkit_status gfkit_run_evolve(const gfkit_config* config, const char* out_dir) {
  if (!config || !out_dir) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] { gfkit::run_evolve_command(config->c, out_dir); });
}

gfkit_status gfkit_fit_rate_csv(const char* diagnostics_csv, const char* column, double t_lo,
                                double t_hi, double* lambda, double* intercept,
                                double* r_squared, int* floor_hit) {
  if (!diagnostics_csv || !column) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::RateFit fit = gfkit::run_rate_command(diagnostics_csv, column, t_lo, t_hi);
    if (lambda) *lambda = fit.lambda;
    if (intercept) *intercept = fit.intercept;
    if (r_squared) *r_squared = fit.r_squared;
    if (floor_hit) *floor_hit = fit.floor_hit ? 1 : 0;
  });
}

gfkit_status gfkit_poincare_counterexample(const gfkit_config* config, const char* phi,
                                           double* d2, double* variance, double* ratio) {
  if (!config) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gfkit::PoincareReport r =
        gfkit::run_counterexample_command(config->c, phi ? phi : "sin");
    if (d2) *d2 = r.d2;
    if (variance) *variance = r.variance;
    if (ratio) *ratio = r.ratio;
  });
}

gfkit_status gfkit_verify(const gfkit_config* config, double slack, const char* checks_csv,
                          char** report) {
  if (!config) return fail(GFKIT_INVALID_ARGUMENT, "null argument");
  bool all_pass = false;
  gfkit_status st = guarded([&] {
    std::vector<std::string> only;
    if (checks_csv && *checks_csv) {
      std::string s(checks_csv);
      size_t pos = 0;
      while (pos != std::string::npos) {
        size_t comma = s.find(',', pos);
        only.push_back(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
        pos = comma == std::string::npos ? comma : comma + 1;
      }
    }
    gfkit::VerifyReport rep = gfkit::run_verify_command(config->c, slack, only);
    all_pass = rep.all_pass;
    if (report) {
      const std::string text = gfkit::verify_report_json(rep);
      *report = static_cast<char*>(std::malloc(text.size() + 1));
      if (!*report) throw std::bad_alloc();
      std::memcpy(*report, text.c_str(), text.size() + 1);
    }
  });
  if (st != GFKIT_OK) return st;
  return all_pass ? GFKIT_OK : fail(GFKIT_CHECK_FAILED, "one or more checks failed");
}

void gfkit_string_free(char* s) { std::free(s); }

}  // extern "C"
