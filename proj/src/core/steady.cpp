#include "steady.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace gfkit {

SteadyState steady_explicit_uniform(double B, const Grid& grid) {
  if (!(B > 0.0)) throw std::invalid_argument("steady_explicit_uniform: B must be > 0");
  GridFunction f = sample(grid, [B](double x) { return 4.0 * B * B * x * std::exp(-2.0 * B * x); });
  const double norm = integrate(f);
  for (double& v : f.values) v /= norm;
  Density d = make_density(std::move(f));
  const double res = steady_residual(Kernel::uniform(), B, d.f);
  return SteadyState{std::move(d), SteadyMethod::Explicit, res, 0};
}

double steady_residual(const Kernel& kernel, double B, const GridFunction& N) {
  const Grid& g = N.grid;
  const double h = g.spacing();
  const double kB = kernel.fragment_count() * B;
  GridFunction gain = kernel.apply_gain(N, B);
  GridFunction r = make_grid_function(g);
  r[0] = 0.0;  // boundary row N(0)=0 holds by construction
  for (int i = 1; i < g.n_nodes(); ++i)
    r[i] = (N[i] - N[i - 1]) / h + kB * N[i] - B * gain[i];
  return l1_norm(r);
}

SteadyState steady_numeric(const Kernel& kernel, double B, const Grid& grid,
                           const SteadyOptions& opts) {
  if (!(B > 0.0)) throw std::invalid_argument("steady_numeric: B must be > 0");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("steady_numeric: tol must be > 0");

  SimConfig cfg{kernel, B, TauSpec{}, grid, opts.dt, 0.0, 0.0, false, true};
  double dt = opts.dt > 0.0 ? opts.dt : cfl_dt(grid, 1.0, kernel, B);
  const double bound = stability_dt_bound(grid, 1.0, kernel, B);
  if (dt > bound) throw StabilityError("steady_numeric: dt exceeds the stability bound");

  // Seed: the explicit uniform equilibrium has the right boundary behavior
  // and tail decay for every kernel in the family.
  GridFunction n = steady_explicit_uniform(B, grid).density.f;

  const long block = std::max<long>(1, std::lround((1.0 / B) / dt));
  const double block_time = block * dt;
  std::vector<double> prev(n.values);

  long steps = 0;
  double rate = std::numeric_limits<double>::infinity();
  while (steps < opts.max_steps) {
    prev = n.values;
    for (long q = 0; q < block && steps < opts.max_steps; ++q, ++steps) {
      n = step_n(n, cfg, dt);
      const double mass = integrate(n);
      if (!(mass > 0.0) || !std::isfinite(mass))
        throw ConvergenceError("steady_numeric: iteration lost positivity", rate);
      for (double& v : n.values) v /= mass;
    }
    double diff = 0.0;
    {
      GridFunction d = n;
      for (int i = 0; i < d.size(); ++i) d[i] -= prev[static_cast<size_t>(i)];
      diff = l1_norm(d);
    }
    rate = diff / block_time;
    if (rate < opts.tol) {
      Density dens = make_density(std::move(n));
      const double res = steady_residual(kernel, B, dens.f);
      return SteadyState{std::move(dens), SteadyMethod::LongTimeIteration, res, steps};
    }
  }
  throw ConvergenceError("steady_numeric: no convergence within max_steps (last rate " +
                             std::to_string(rate) + ")",
                         rate);
}

}  // namespace gfkit
