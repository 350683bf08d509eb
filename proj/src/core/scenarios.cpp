#include "scenarios.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace gfkit {
namespace {

constexpr double kXiResidualGate = 1e-4;

double eta_value(double B, double x) { return x * (B * x - 2.0) * std::exp(-B * x); }

}  // namespace

GridFunction sample_bump(const Grid& grid, const BumpSpec& bump) {
  if (!(bump.width > 0.0)) throw std::invalid_argument("bump: width must be > 0");
  if (bump.center - bump.width / 2.0 < 0.0 || bump.center + bump.width / 2.0 > grid.x_max())
    throw std::invalid_argument("bump: support must lie inside (0, x_max)");
  return sample(grid, [&](double x) {
    const double s = (x - bump.center) / bump.width;
    if (std::abs(s) > 0.5) return 0.0;
    const double c = std::cos(std::numbers::pi * s);
    return bump.amplitude * c * c * std::sin(2.0 * std::numbers::pi * s);
  });
}

Scenario eta_mode(double B, double rho, const Grid& grid) {
  if (!(B > 0.0)) throw std::invalid_argument("eta_mode: B must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("eta_mode: rho must be > 0");
  SteadyState st = steady_explicit_uniform(B, grid);
  GridFunction n0 = st.density.f;
  for (int i = 0; i < n0.size(); ++i) {
    n0[i] = rho * n0[i] + eta_value(B, grid.node(i));
  }
  double min_v = 0.0;
  for (double v : n0.values) min_v = std::min(min_v, v);
  // eta is negative on (0, 2/B); for small rho the initial data dips below
  // zero and the run will clip, which the scenario records.
  const bool clipping_expected = min_v < -1e-12;

  Density N = st.density;
  auto exact = [B, rho, N](double t, double x) {
    return rho * interpolate(N.f, x) + std::exp(-B * t) * eta_value(B, x);
  };
  return Scenario{"eta_mode", Kernel::uniform(), B,    TauSpec{},         rho,
                  std::move(n0),  B,             true, clipping_expected, exact};
}

Scenario xi_mode(double B, double rho, const Grid& grid, const SteadyState& N_mitosis) {
  if (!(B > 0.0)) throw std::invalid_argument("xi_mode: B must be > 0");
  if (!(N_mitosis.density.f.grid == grid)) throw std::invalid_argument("xi_mode: grid mismatch");
  if (N_mitosis.residual_l1 > kXiResidualGate)
    throw std::invalid_argument("xi_mode: steady-state residual " +
                                std::to_string(N_mitosis.residual_l1) +
                                " exceeds the oracle-quality gate");

  GridFunction dN = differentiate(N_mitosis.density.f);
  GridFunction xi = sample(grid, [&](double x) { return 0.5 * interpolate(dN, x / 2.0); });
  // int xi = int dN = N(inf) - N(0) = 0; check the numeric build honored it.
  const double xi_mass = integrate(xi);
  if (std::abs(xi_mass) > 1e-6)
    throw std::invalid_argument("xi_mode: integral of xi is " + std::to_string(xi_mass) +
                                ", construction from the numeric steady state failed");

  GridFunction n0 = xi;
  for (int i = 0; i < n0.size(); ++i) n0[i] += rho * N_mitosis.density.f[i];
  Density N = N_mitosis.density;
  auto exact = [B, rho, N, xi](double t, double x) {
    return rho * interpolate(N.f, x) + std::exp(-B * t) * interpolate(xi, x);
  };
  Scenario sc{"xi_mode", Kernel::equal_mitosis(), B,    TauSpec{}, rho,
              std::move(n0),  B,                  false, false,     exact};
  return sc;
}

Scenario perturbed_steady(const Kernel& kernel, double B, double rho, const BumpSpec& bump,
                          const Grid& grid, const Density& N) {
  if (!(B > 0.0)) throw std::invalid_argument("perturbed_steady: B must be > 0");
  if (!(N.f.grid == grid)) throw std::invalid_argument("perturbed_steady: grid mismatch");
  GridFunction n0 = sample_bump(grid, bump);
  for (int i = 0; i < n0.size(); ++i) n0[i] += rho * N.f[i];
  for (double v : n0.values)
    if (v < 0.0)
      throw std::invalid_argument("perturbed_steady: amplitude makes the initial data negative");
  const double k = kernel.fragment_count();
  return Scenario{"perturbed_steady", kernel, B,    TauSpec{}, rho, std::move(n0),
                  (k - 1.0) * B,      true,   false, nullptr};
}

Scenario tau_scenario(double tau0, double s, const Kernel& kernel, double B,
                      const Grid& grid, const Density& N, double rho, const BumpSpec& bump) {
  TauSpec tau{tau0, s};
  if (!(tau0 > 0.0)) throw std::invalid_argument("tau_scenario: tau0 must be > 0");
  if (s < 0.0) throw std::invalid_argument("tau_scenario: s must be >= 0");
  const double k = kernel.fragment_count();
  if (s > 0.0 && !(tau.theta(k, B) > 0.0))
    throw ConfigError("tau_scenario: hypothesis violated, (k-1)B - s must be > 0");
  Scenario sc = perturbed_steady(kernel, B, rho, bump, grid, N);
  sc.name = "tau_scenario";
  sc.tau = tau;
  sc.expected_rate = s > 0.0 ? tau.theta(k, B) : (k - 1.0) * B;
  return sc;
}

}  // namespace gfkit
