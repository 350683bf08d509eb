#include "evolve.hpp"

#include <cmath>

#include "errors.hpp"

namespace gfkit {

double TauSpec::value(double x) const { return tau0 + s * (1.0 - std::exp(-x)); }

double cfl_dt(const Grid& grid, double tau_max, const Kernel& kernel, double B) {
  if (!(tau_max > 0.0)) throw std::invalid_argument("cfl_dt: tau_max must be > 0");
  return 0.9 * std::min(grid.spacing() / tau_max, 1.0 / (kernel.fragment_count() * B));
}

double stability_dt_bound(const Grid& grid, double tau_max, const Kernel& kernel, double B) {
  return std::min(grid.spacing() / tau_max, 1.0 / (kernel.fragment_count() * B));
}

void validate_config(const SimConfig& config) {
  if (!(config.B > 0.0)) throw ConfigError("config: B must be > 0");
  if (!(config.tau.tau0 > 0.0)) throw ConfigError("config: tau0 must be > 0");
  if (config.tau.s < 0.0) throw ConfigError("config: s must be >= 0");
  if (config.tau.s > 0.0 &&
      !(config.tau.theta(config.kernel.fragment_count(), config.B) > 0.0))
    throw ConfigError("config: hypothesis violated, (k-1)B - s must be > 0");
  if (config.t_end < 0.0) throw ConfigError("config: t_end must be >= 0");
  if (config.t_end > 0.0 && !(config.snapshot_every > 0.0))
    throw ConfigError("config: snapshot_every must be > 0");
}

namespace {

void check_dt(const SimConfig& c, double dt) {
  const double bound = stability_dt_bound(c.grid, c.tau.max(), c.kernel, c.B);
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12))
    throw StabilityError("dt exceeds the stability bound " + std::to_string(bound));
}

// Scratch-reusing stepper for the time loop.
struct Stepper {
  const SimConfig& cfg;
  double kB;
  std::vector<double> tau;   // tau at nodes
  std::vector<double> work;  // previous state during the in-place sweep

  explicit Stepper(const SimConfig& c) : cfg(c), kB(c.kernel.fragment_count() * c.B) {
    const int n = c.grid.n_nodes();
    tau.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) tau[static_cast<size_t>(i)] = c.tau.value(c.grid.node(i));
    work.resize(static_cast<size_t>(n));
  }

  double node_weight(int i) const {
    const double h = cfg.grid.spacing();
    return (i == 0 || i == cfg.grid.n_nodes() - 1) ? 0.5 * h : h;
  }

  // n <- n + dt * (-d(tau n)/dx - kB n + B gain), n(0) = 0.
  double advance_n(GridFunction& n, double dt) {
    const int nn = n.size();
    const double h = cfg.grid.spacing();
    GridFunction gain = cfg.kernel.apply_gain(n, cfg.B);
    if (gain[0] != 0.0) gain[1] += 0.5 * gain[0];  // conservative boundary deposit
    std::copy(n.values.begin(), n.values.end(), work.begin());
    n[0] = 0.0;
    double clipped = 0.0;
    for (int i = 1; i < nn; ++i) {
      const double flux =
          (tau[static_cast<size_t>(i)] * work[static_cast<size_t>(i)] -
           tau[static_cast<size_t>(i - 1)] * work[static_cast<size_t>(i - 1)]) / h;
      double v = work[static_cast<size_t>(i)] +
                 dt * (-flux - kB * work[static_cast<size_t>(i)] + cfg.B * gain[i]);
      if (cfg.clip_negative && v < 0.0) {
        clipped -= v * node_weight(i);
        v = 0.0;
      }
      n[i] = v;
    }
    return clipped;
  }

  // m <- m + dt * (-tau dm/dx - kB m + B beta(m)), m(0) = 0.
  void advance_m(GridFunction& m, double dt) {
    const int nn = m.size();
    const double h = cfg.grid.spacing();
    GridFunction bm = cfg.kernel.apply_beta(m, cfg.B);
    std::copy(m.values.begin(), m.values.end(), work.begin());
    m[0] = 0.0;
    for (int i = 1; i < nn; ++i) {
      const double dmdx =
          (work[static_cast<size_t>(i)] - work[static_cast<size_t>(i - 1)]) / h;
      m[i] = work[static_cast<size_t>(i)] +
             dt * (-tau[static_cast<size_t>(i)] * dmdx - kB * work[static_cast<size_t>(i)] +
                   cfg.B * bm[i]);
    }
  }
};

}  // namespace

GridFunction step_n(const GridFunction& n, const SimConfig& config, double dt,
                    double* clipped_mass) {
  if (!(n.grid == config.grid)) throw std::invalid_argument("step_n: grid mismatch");
  check_dt(config, dt);
  Stepper st(config);
  GridFunction out = n;
  const double clipped = st.advance_n(out, dt);
  if (clipped_mass) *clipped_mass = clipped;
  return out;
}

GridFunction step_m(const GridFunction& m, const SimConfig& config, double dt) {
  if (!(m.grid == config.grid)) throw std::invalid_argument("step_m: grid mismatch");
  check_dt(config, dt);
  Stepper st(config);
  GridFunction out = m;
  st.advance_m(out, dt);
  return out;
}

Trajectory run(const SimConfig& config, const GridFunction& n0,
               std::optional<Density> reference) {
  validate_config(config);
  if (!(n0.grid == config.grid)) throw std::invalid_argument("run: grid mismatch");
  if (reference && !(reference->f.grid == config.grid))
    throw std::invalid_argument("run: reference grid mismatch");

  Trajectory traj{config, 0.0, integrate(n0), std::move(reference), {}};

  GridFunction n = n0;
  std::optional<GridFunction> m;
  if (config.track_m) {
    if (!traj.reference)
      throw MissingDataError("run: track_M requires a reference steady state");
    GridFunction diff = n0;
    for (int i = 0; i < diff.size(); ++i) diff[i] -= traj.rho0 * traj.reference->f[i];
    m = antiderivative(diff);
  }

  int nsnap = 0;
  double dt = config.snapshot_every;  // placeholder when t_end == 0
  if (config.t_end > 0.0) {
    double dtb = config.dt > 0.0 ? config.dt
                                 : cfl_dt(config.grid, config.tau.max(), config.kernel, config.B);
    check_dt(config, dtb);
    nsnap = static_cast<int>(std::ceil(config.t_end / config.snapshot_every - 1e-9));
    const int sps = std::max(1, static_cast<int>(std::ceil(config.snapshot_every / dtb - 1e-12)));
    dt = config.snapshot_every / sps;
    traj.dt_used = dt;

    Stepper st(config);
    const double l1_0 = l1_norm(n);
    double clipped_cum = 0.0;
    traj.snapshots.push_back(Snapshot{0.0, n, m, 0.0});
    for (int j = 1; j <= nsnap; ++j) {
      for (int q = 0; q < sps; ++q) {
        clipped_cum += st.advance_n(n, dt);
        if (m) st.advance_m(*m, dt);
      }
      const double l1 = l1_norm(n);
      if (!std::isfinite(l1) || l1 > 1e6 * std::max(l1_0, 1e-300))
        throw StabilityError("blow-up detected: L1 norm exceeded 1e6 x initial");
      traj.snapshots.push_back(Snapshot{j * config.snapshot_every, n, m, clipped_cum});
    }
  } else {
    traj.dt_used = 0.0;
    traj.snapshots.push_back(Snapshot{0.0, n, m, 0.0});
  }
  return traj;
}

}  // namespace gfkit
