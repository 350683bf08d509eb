#pragma once

#include "evolve.hpp"
#include "grid.hpp"
#include "kernel.hpp"

namespace gfkit {

enum class SteadyMethod { Explicit, LongTimeIteration };

struct SteadyState {
  Density density;  // normalized to unit integral
  SteadyMethod method;
  double residual_l1;
  long iterations;
};

struct SteadyOptions {
  double dt = 0.0;  // <= 0 selects cfl_dt
  double tol = 1e-6;
  long max_steps = 2000000;
};

/// Samples N(x) = 4 B^2 x e^{-2Bx} (the uniform-fragmentation equilibrium),
/// renormalized so the trapezoid integral is exactly 1.
SteadyState steady_explicit_uniform(double B, const Grid& grid);

/// L1 norm of the discrete residual of the stationary equation, with the
/// first-order upwind difference for d/dx and apply_gain for the integral.
double steady_residual(const Kernel& kernel, double B, const GridFunction& N);

/// Power iteration on the evolution semigroup: evolves from the explicit
/// uniform profile, renormalizing after every step, until the L1 difference
/// of iterates spaced 1/B apart drops below tol per unit time. Throws
/// ConvergenceError (carrying the last difference rate) beyond max_steps.
SteadyState steady_numeric(const Kernel& kernel, double B, const Grid& grid,
                           const SteadyOptions& opts = {});

}  // namespace gfkit
