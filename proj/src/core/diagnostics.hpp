#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "evolve.hpp"
#include "grid.hpp"
#include "kernel.hpp"

namespace gfkit {

struct RateFit {
  double lambda;     // fitted exponential rate (minus the log-slope)
  double intercept;  // value of the log-linear fit at t = 0
  double r_squared;
  double t_lo, t_hi;
  bool floor_hit;  // series touched the 1e-13 positivity floor in the window
};

/// Least-squares line through (t, ln v) on the window. Throws for nonpositive
/// values or fewer than 5 points in the window.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& v,
                 double t_lo, double t_hi);

/// Trapezoid integral of |n - rho N|.
double l1_distance(const GridFunction& n, const Density& N, double rho);

struct SemiNormReport {
  double seminorm;
  double term_derivative_part;  // int |dM/dx + kB M - B beta(M)|
  double term_m_l1_part;        // (k+1) B int |M|
  double w11_bound;             // int |dM/dx| + 2(k+1)B int |M|
};

/// The L1 functional on initial data built from M = antiderivative(n0 - rho N),
/// with rho = integral of n0 and dM/dx evaluated analytically as n0 - rho N.
SemiNormReport seminorm(const GridFunction& n0, const Density& N, const Kernel& kernel,
                        double B);

struct CertificateReport {
  bool pass;
  double worst_ratio;
};

/// Checks l1_dist(t) <= slack * seminorm0 * e^{-(k-1)Bt} at every snapshot.
CertificateReport decay_certificate(const std::vector<double>& t,
                                    const std::vector<double>& l1_dist, double seminorm0,
                                    double k, double B, double slack);

struct EntropyReport {
  double value;
  int excluded_nodes;  // nodes with N below 1e-12, left out of the sum
};

/// int N H(n/N) dx with H(r) = (r - rho)^2.
EntropyReport relative_entropy_quadratic(const GridFunction& n, const Density& N, double rho);

/// D2[u] = B int int kappa(x,y) N(y) (u(x)-u(y))^2 dx dy; closed forms for the
/// atomic kernels, cumulative-moment recombination for the density ones.
double dissipation_quadratic(const Kernel& kernel, const Density& N, const GridFunction& u,
                             double B);

struct PoincareReport {
  double d2;
  double variance;  // int N u^2 after centering
  double ratio;
  bool degenerate;  // constant phi: centered u vanishes identically
};

/// Builds u(x) = phi(x / 2^j) for x in [2^j, 2^{j+1}) from phi on [1,2] with
/// phi(1) = phi(2), centers it against N, and reports D2[u], int N u^2 and
/// their ratio (an upper bound on any would-be Poincare constant).
PoincareReport poincare_counterexample(const std::function<double(double)>& phi,
                                       const Grid& grid, double B, const Density& N_mitosis);

struct MDecayReport {
  bool pass;
  double worst_ratio;
  double rate;  // (k-1)B, or theta for the non-constant-velocity family
  double slack;
  std::optional<RateFit> fit;
};

/// Checks int|M(t)| <= slack * e^{-rate t} int|M(0)| along the trajectory,
/// slack defaulting to 1 + 10(h + dt), and fits the empirical M-decay rate.
MDecayReport m_decay_report(const Trajectory& traj, std::optional<double> theta = {},
                            double slack_override = 0.0);

struct ConservationRow {
  double t;
  double number;            // int n
  double mass;              // int x n
  double drift;             // |int n - rho0|
  double balance_residual;  // d/dt int xn + (k-1)B int xn - rho0
};

std::vector<ConservationRow> conservation_report(const Trajectory& traj);

/// Per snapshot, the L1 residual of the closed M-equation evaluated with the
/// scheme's own discrete operators; M is rebuilt from n as
/// antiderivative(n - rho0 N) and the time quotient taken over one scheme step.
std::vector<double> m_equation_residual(const Trajectory& traj);

struct DiagnosticsRow {
  double t;
  double number;
  double mass;
  double l1_dist;
  double log_l1_dist;
  double m_l1;
  double entropy_quadratic;
  double dissipation_quadratic;
  double bound_value;  // seminorm0 * e^{-rate t}
  double tail_mass;    // integral over the last 10% of the grid
  double clipped_mass;
};

std::vector<DiagnosticsRow> diagnostics_table(const Trajectory& traj);

inline constexpr double kLogFitFloor = 1e-13;
inline constexpr double kEntropyNodeFloor = 1e-12;

}  // namespace gfkit
