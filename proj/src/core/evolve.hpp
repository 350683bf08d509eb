#pragma once

#include <optional>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"

namespace gfkit {

/// Growth velocity tau(x) = tau0 + s*(1 - exp(-x)).
/// s = 0 is the constant-velocity case; tau_m = tau0 and sup tau' = s.
struct TauSpec {
  double tau0 = 1.0;
  double s = 0.0;

  double value(double x) const;
  double max() const { return tau0 + s; }
  bool constant() const { return s == 0.0; }
  /// Decay rate of the M-equation: (k-1)B - sup tau'.
  double theta(double k, double B) const { return (k - 1.0) * B - s; }
};

struct SimConfig {
  Kernel kernel;
  double B = 1.0;
  TauSpec tau;
  Grid grid;
  double dt = 0.0;  // <= 0 selects cfl_dt automatically
  double t_end = 0.0;
  double snapshot_every = 0.1;
  bool track_m = false;
  bool clip_negative = true;
};

/// 0.9 * min(h/tau_max, 1/(kB)): transport CFL combined with the explicit
/// sink bound.
double cfl_dt(const Grid& grid, double tau_max, const Kernel& kernel, double B);

/// Hard stability limit min(h/tau_max, 1/(kB)); steps beyond it are refused.
double stability_dt_bound(const Grid& grid, double tau_max, const Kernel& kernel, double B);

void validate_config(const SimConfig& config);

/// One explicit Euler step of the density equation: first-order upwind for
/// d(tau n)/dx, inflow n(0)=0, sink -kBn, gain apply_gain. The gain mass
/// landing in the half-cell at the pinned boundary node is redeposited into
/// node 1 so that the discrete fragment count is conserved to O(h^2); without
/// this the uniform kernel loses (h/2)*gain(0) per unit time. Negative values
/// from discretization error are clipped to 0 and the clipped mass accumulated.
GridFunction step_n(const GridFunction& n, const SimConfig& config, double dt,
                    double* clipped_mass = nullptr);

/// Same scheme for the anti-derivative equation: non-conservative tau(x) dM/dx,
/// boundary M(0)=0, gain apply_beta, no clipping (M is signed).
GridFunction step_m(const GridFunction& m, const SimConfig& config, double dt);

struct Snapshot {
  double t;
  GridFunction n;
  std::optional<GridFunction> m;
  double clipped_cum;  // total clipped mass up to t
};

struct Trajectory {
  SimConfig config;
  double dt_used;
  double rho0;
  std::optional<Density> reference;  // steady profile used by diagnostics
  std::vector<Snapshot> snapshots;
};

/// Time loop with snapshots every snapshot_every up to >= t_end. When track_m
/// is set, M0 = antiderivative(n0 - rho0 * reference) advances alongside n by
/// its own closed equation.
Trajectory run(const SimConfig& config, const GridFunction& n0,
               std::optional<Density> reference);

}  // namespace gfkit
