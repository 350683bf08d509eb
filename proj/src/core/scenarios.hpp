#pragma once

#include <functional>
#include <optional>
#include <string>

#include "evolve.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "steady.hpp"

namespace gfkit {

/// Smooth compactly supported perturbation: amplitude * cos^2(pi s) sin(2 pi s)
/// with s = (x - center)/width on [-1/2, 1/2]. Odd about the center, so its
/// integral vanishes analytically.
struct BumpSpec {
  double center = 1.0;
  double width = 1.5;
  double amplitude = 0.1;
};

GridFunction sample_bump(const Grid& grid, const BumpSpec& bump);

struct Scenario {
  std::string name;
  Kernel kernel;
  double B;
  TauSpec tau;
  double rho;
  GridFunction initial;
  std::optional<double> expected_rate;
  bool clip_negative = true;   // xi mode runs signed data and disables clipping
  bool expects_clipping = false;
  /// Closed-form solution (t, x) -> value when known, else empty.
  std::function<double(double, double)> exact;
};

/// eta(x) = x (Bx - 2) e^{-Bx} on top of the explicit uniform equilibrium:
/// an exact decaying mode with rate B.
Scenario eta_mode(double B, double rho, const Grid& grid);

/// xi(x) = (1/2) dN/dx(x/2) on top of the numeric equal-mitosis equilibrium;
/// exact mode of rate B built from a residual-gated numeric steady state.
Scenario xi_mode(double B, double rho, const Grid& grid, const SteadyState& N_mitosis);

/// rho N plus a mean-zero bump; generic certificate test data, expected decay
/// rate lower-bounded by (k-1)B.
Scenario perturbed_steady(const Kernel& kernel, double B, double rho, const BumpSpec& bump,
                          const Grid& grid, const Density& N);

/// Non-constant velocity tau(x) = tau0 + s(1 - e^{-x}); only the int|M| decay
/// at rate theta = (k-1)B - s is certified (no stationary tau-problem is solved).
Scenario tau_scenario(double tau0, double s, const Kernel& kernel, double B,
                      const Grid& grid, const Density& N, double rho = 1.0,
                      const BumpSpec& bump = {});

}  // namespace gfkit
