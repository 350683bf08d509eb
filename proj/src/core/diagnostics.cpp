#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace gfkit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double node_weight(const Grid& g, int i) {
  return (i == 0 || i == g.n_nodes() - 1) ? 0.5 * g.spacing() : g.spacing();
}

// Cumulative trapezoid of w(x) f(x) with w(x) = x^alpha (w(0) taken as 0 for
// alpha != 0; integrable singularity for alpha < 0).
std::vector<double> cumtrapz_weighted(const Grid& g, const std::vector<double>& f,
                                      double alpha) {
  const int n = g.n_nodes();
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  auto wf = [&](int i) {
    if (i == 0) return alpha == 0.0 ? f[0] : 0.0;
    return (alpha == 0.0 ? 1.0 : std::pow(g.node(i), alpha)) * f[static_cast<size_t>(i)];
  };
  double acc = 0.0;
  double prev = wf(0);
  for (int i = 1; i < n; ++i) {
    const double cur = wf(i);
    acc += 0.5 * g.spacing() * (prev + cur);
    out[static_cast<size_t>(i)] = acc;
    prev = cur;
  }
  return out;
}

}  // namespace

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& v,
                 double t_lo, double t_hi) {
  if (t.size() != v.size()) throw std::invalid_argument("fit_rate: length mismatch");
  std::vector<double> ts, ys;
  bool floor_hit = false;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo - 1e-12 || t[i] > t_hi + 1e-12) continue;
    if (!(v[i] > 0.0))
      throw std::invalid_argument("fit_rate: nonpositive value in window");
    if (v[i] < kLogFitFloor) floor_hit = true;
    ts.push_back(t[i]);
    ys.push_back(std::log(v[i]));
  }
  if (ts.size() < 5) throw std::invalid_argument("fit_rate: fewer than 5 points in window");

  const double n = static_cast<double>(ts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double denom = n * stt - st * st;
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double pred = intercept + slope * ts[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return RateFit{-slope, intercept, r2, t_lo, t_hi, floor_hit};
}

double l1_distance(const GridFunction& n, const Density& N, double rho) {
  check_same_grid(n, N.f);
  GridFunction d = n;
  for (int i = 0; i < d.size(); ++i) d[i] -= rho * N.f[i];
  return l1_norm(d);
}

SemiNormReport seminorm(const GridFunction& n0, const Density& N, const Kernel& kernel,
                        double B) {
  check_same_grid(n0, N.f);
  const double rho = integrate(n0);
  const double k = kernel.fragment_count();
  GridFunction dMdx = n0;
  for (int i = 0; i < dMdx.size(); ++i) dMdx[i] -= rho * N.f[i];
  GridFunction M = antiderivative(dMdx);
  GridFunction beta_m = kernel.apply_beta(M, B);
  GridFunction inner = make_grid_function(n0.grid);
  for (int i = 0; i < inner.size(); ++i)
    inner[i] = dMdx[i] + k * B * M[i] - B * beta_m[i];
  const double term1 = l1_norm(inner);
  const double m_l1 = l1_norm(M);
  const double term2 = (k + 1.0) * B * m_l1;
  const double w11 = l1_norm(dMdx) + 2.0 * (k + 1.0) * B * m_l1;
  return SemiNormReport{term1 + term2, term1, term2, w11};
}

CertificateReport decay_certificate(const std::vector<double>& t,
                                    const std::vector<double>& l1_dist, double seminorm0,
                                    double k, double B, double slack) {
  if (!std::isfinite(seminorm0))
    throw std::invalid_argument("decay_certificate: seminorm of the initial data is not finite");
  if (t.size() != l1_dist.size())
    throw std::invalid_argument("decay_certificate: length mismatch");
  bool pass = true;
  double worst = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    const double rhs = seminorm0 * std::exp(-(k - 1.0) * B * t[i]);
    double ratio;
    if (rhs > 0.0) {
      ratio = l1_dist[i] / rhs;
    } else {
      ratio = l1_dist[i] < kLogFitFloor ? 0.0 : std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, ratio);
    if (!(l1_dist[i] <= slack * rhs || l1_dist[i] < kLogFitFloor)) pass = false;
  }
  return CertificateReport{pass, worst};
}

EntropyReport relative_entropy_quadratic(const GridFunction& n, const Density& N,
                                         double rho) {
  check_same_grid(n, N.f);
  double acc = 0.0;
  int excluded = 0;
  for (int i = 0; i < n.size(); ++i) {
    if (N.f[i] < kEntropyNodeFloor) {
      ++excluded;
      continue;
    }
    const double u = n[i] / N.f[i] - rho;
    acc += node_weight(n.grid, i) * N.f[i] * u * u;
  }
  return EntropyReport{acc, excluded};
}

double dissipation_quadratic(const Kernel& kernel, const Density& N, const GridFunction& u,
                             double B) {
  check_same_grid(u, N.f);
  const Grid& g = u.grid;
  const int n = g.n_nodes();
  GridFunction integrand = make_grid_function(g);

  switch (kernel.variant()) {
    case KernelVariant::EqualMitosis: {
      // D2[u] = 4B int N(2x) (u(x) - u(2x))^2 dx
      for (int i = 0; i < n; ++i) {
        const double x2 = 2.0 * g.node(i);
        const double du = u[i] - interpolate(u, x2);
        integrand[i] = 4.0 * B * interpolate(N.f, x2) * du * du;
      }
      return integrate(integrand);
    }
    case KernelVariant::GeneralMitosis: {
      const double s = kernel.sigma();
      for (int i = 0; i < n; ++i) {
        const double y = g.node(i);
        const double d1 = interpolate(u, s * y) - u[i];
        const double d2 = interpolate(u, (1.0 - s) * y) - u[i];
        integrand[i] = B * N.f[i] * (d1 * d1 + d2 * d2);
      }
      return integrate(integrand);
    }
    case KernelVariant::Uniform:
    case KernelVariant::Homogeneous: {
      // inner(y) = int_0^y kappa(x,y)(u(x)-u(y))^2 dx expands into cumulative
      // moments of u against the weight x^alpha.
      const double a = kernel.variant() == KernelVariant::Uniform ? 0.0 : kernel.alpha();
      std::vector<double> ones(static_cast<size_t>(n), 1.0);
      std::vector<double> u1(u.values);
      std::vector<double> u2(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) u2[static_cast<size_t>(i)] = u[i] * u[i];
      auto P = cumtrapz_weighted(g, ones, a);
      auto C1 = cumtrapz_weighted(g, u1, a);
      auto C2 = cumtrapz_weighted(g, u2, a);
      for (int i = 1; i < n; ++i) {
        const double y = g.node(i);
        const double inner = std::max(
            0.0, C2[static_cast<size_t>(i)] - 2.0 * u[i] * C1[static_cast<size_t>(i)] +
                     u[i] * u[i] * P[static_cast<size_t>(i)]);
        integrand[i] = B * N.f[i] * (2.0 + a) / std::pow(y, 1.0 + a) * inner;
      }
      return integrate(integrand);
    }
  }
  return 0.0;
}

PoincareReport poincare_counterexample(const std::function<double(double)>& phi,
                                       const Grid& grid, double B, const Density& N_mitosis) {
  if (!(N_mitosis.f.grid == grid))
    throw std::invalid_argument("poincare_counterexample: grid mismatch");
  if (std::abs(phi(1.0) - phi(2.0)) > 1e-9 * std::max(1.0, std::abs(phi(1.0))))
    throw std::invalid_argument("poincare_counterexample: phi(1) != phi(2)");

  GridFunction u = make_grid_function(grid);
  for (int i = 1; i < grid.n_nodes(); ++i) {
    const double x = grid.node(i);
    int j = static_cast<int>(std::floor(std::log2(x)));
    double s = x / std::exp2(j);
    if (s < 1.0) {
      s *= 2.0;
      --j;
    } else if (s >= 2.0) {
      s /= 2.0;
      ++j;
    }
    u[i] = phi(s);
  }
  u[0] = 0.0;  // N(0) = 0, the node carries no weight

  GridFunction uN = u;
  for (int i = 0; i < u.size(); ++i) uN[i] *= N_mitosis.f[i];
  const double c = integrate(uN) / N_mitosis.rho;
  GridFunction uc = u;
  for (int i = 1; i < u.size(); ++i) uc[i] -= c;

  const double d2 = dissipation_quadratic(Kernel::equal_mitosis(), N_mitosis, uc, B);
  GridFunction varf = uc;
  for (int i = 0; i < varf.size(); ++i) varf[i] = N_mitosis.f[i] * uc[i] * uc[i];
  const double variance = integrate(varf);
  const bool degenerate = variance < 1e-12;
  const double ratio = degenerate ? kNaN : d2 / variance;
  return PoincareReport{d2, variance, ratio, degenerate};
}

MDecayReport m_decay_report(const Trajectory& traj, std::optional<double> theta,
                            double slack_override) {
  if (traj.snapshots.empty() || !traj.snapshots.front().m)
    throw MissingDataError("m_decay_report: trajectory did not track M");
  const double k = traj.config.kernel.fragment_count();
  const double B = traj.config.B;
  const double rate = theta ? *theta : (k - 1.0) * B;
  const double slack = slack_override > 0.0
                           ? slack_override
                           : 1.0 + 10.0 * (traj.config.grid.spacing() + traj.dt_used);

  std::vector<double> ts, ml1;
  for (const auto& snap : traj.snapshots) {
    ts.push_back(snap.t);
    ml1.push_back(l1_norm(*snap.m));
  }
  const double m0 = ml1.front();
  bool pass = true;
  double worst = 0.0;
  if (m0 < 1e-300) {
    for (double v : ml1)
      if (v > 1e-12) pass = false;
  } else {
    for (size_t i = 0; i < ts.size(); ++i) {
      const double bound = m0 * std::exp(-rate * ts[i]);
      worst = std::max(worst, ml1[i] / bound);
      if (!(ml1[i] <= slack * bound)) pass = false;
    }
  }
  std::optional<RateFit> fit;
  try {
    fit = fit_rate(ts, ml1, 1.0 / std::max(rate, 1e-12), ts.back());
  } catch (const std::invalid_argument&) {
    // window unusable (short run or floored series); report without a fit
  }
  return MDecayReport{pass, worst, rate, slack, fit};
}

std::vector<ConservationRow> conservation_report(const Trajectory& traj) {
  const double k = traj.config.kernel.fragment_count();
  const double B = traj.config.B;
  const Grid& g = traj.config.grid;
  SimConfig probe = traj.config;
  probe.clip_negative = false;
  const double dt = traj.dt_used > 0.0
                        ? traj.dt_used
                        : cfl_dt(g, traj.config.tau.max(), traj.config.kernel, B);

  std::vector<ConservationRow> rows;
  rows.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) {
    GridFunction xn = snap.n;
    for (int i = 0; i < xn.size(); ++i) xn[i] *= g.node(i);
    const double number = integrate(snap.n);
    const double mass = integrate(xn);
    GridFunction next = step_n(snap.n, probe, dt);
    GridFunction xn1 = next;
    for (int i = 0; i < xn1.size(); ++i) xn1[i] *= g.node(i);
    const double ddt = (integrate(xn1) - mass) / dt;
    rows.push_back(ConservationRow{snap.t, number, mass, std::abs(number - traj.rho0),
                                   ddt + (k - 1.0) * B * mass - traj.rho0});
  }
  return rows;
}

std::vector<double> m_equation_residual(const Trajectory& traj) {
  if (traj.snapshots.empty() || !traj.snapshots.front().m)
    throw MissingDataError("m_equation_residual: trajectory did not track M");
  if (!traj.reference)
    throw MissingDataError("m_equation_residual: trajectory has no reference steady state");
  const Grid& g = traj.config.grid;
  const double h = g.spacing();
  const double k = traj.config.kernel.fragment_count();
  const double B = traj.config.B;
  SimConfig probe = traj.config;
  probe.clip_negative = false;
  const double dt = traj.dt_used > 0.0
                        ? traj.dt_used
                        : cfl_dt(g, traj.config.tau.max(), traj.config.kernel, B);

  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) {
    GridFunction diff = snap.n;
    for (int i = 0; i < diff.size(); ++i) diff[i] -= traj.rho0 * traj.reference->f[i];
    GridFunction M = antiderivative(diff);
    GridFunction next = step_n(snap.n, probe, dt);
    for (int i = 0; i < next.size(); ++i) next[i] -= traj.rho0 * traj.reference->f[i];
    GridFunction M1 = antiderivative(next);
    GridFunction beta_m = traj.config.kernel.apply_beta(M, B);
    GridFunction r = make_grid_function(g);
    for (int i = 1; i < g.n_nodes(); ++i) {
      const double tau_i = traj.config.tau.value(g.node(i));
      r[i] = (M1[i] - M[i]) / dt + tau_i * (M[i] - M[i - 1]) / h + k * B * M[i] -
             B * beta_m[i];
    }
    out.push_back(l1_norm(r));
  }
  return out;
}

std::vector<DiagnosticsRow> diagnostics_table(const Trajectory& traj) {
  const Grid& g = traj.config.grid;
  const double k = traj.config.kernel.fragment_count();
  const double B = traj.config.B;
  const double rate = traj.config.tau.s > 0.0 ? traj.config.tau.theta(k, B)
                                              : (k - 1.0) * B;

  double seminorm0 = kNaN;
  if (traj.reference && !traj.snapshots.empty())
    seminorm0 =
        seminorm(traj.snapshots.front().n, *traj.reference, traj.config.kernel, B).seminorm;

  const double tail_from = 0.9 * g.x_max();
  std::vector<DiagnosticsRow> rows;
  rows.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) {
    DiagnosticsRow row{};
    row.t = snap.t;
    row.number = integrate(snap.n);
    GridFunction xn = snap.n;
    for (int i = 0; i < xn.size(); ++i) xn[i] *= g.node(i);
    row.mass = integrate(xn);
    row.m_l1 = snap.m ? l1_norm(*snap.m) : kNaN;
    row.clipped_mass = snap.clipped_cum;

    GridFunction tail = snap.n;
    for (int i = 0; i < tail.size(); ++i)
      if (g.node(i) < tail_from) tail[i] = 0.0;
    row.tail_mass = integrate(tail);

    if (traj.reference) {
      const double rho_t = row.number;  // conserved quantity; equals rho0 in the continuum
      row.l1_dist = l1_distance(snap.n, *traj.reference, rho_t);
      row.log_l1_dist = row.l1_dist > 0.0 ? std::log(row.l1_dist) : kNaN;
      row.entropy_quadratic =
          relative_entropy_quadratic(snap.n, *traj.reference, rho_t).value;
      GridFunction u = make_grid_function(g);
      for (int i = 0; i < u.size(); ++i)
        u[i] = traj.reference->f[i] >= kEntropyNodeFloor ? snap.n[i] / traj.reference->f[i]
                                                         : 0.0;
      row.dissipation_quadratic =
          dissipation_quadratic(traj.config.kernel, *traj.reference, u, B);
      row.bound_value = seminorm0 * std::exp(-rate * snap.t);
    } else {
      row.l1_dist = row.log_l1_dist = row.entropy_quadratic = row.dissipation_quadratic =
          row.bound_value = kNaN;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gfkit
