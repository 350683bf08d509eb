#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "core/diagnostics.hpp"
#include "core/errors.hpp"
#include "core/evolve.hpp"
#include "core/scenarios.hpp"
#include "core/steady.hpp"

using namespace gfkit;

TEST_CASE("cfl_dt formula") {
  Grid g(20.0, 4001);  // h = 0.005 exactly
  CHECK(cfl_dt(g, 1.0, Kernel::uniform(), 1.0) == doctest::Approx(0.0045).epsilon(1e-12));
  CHECK(cfl_dt(g, 2.0, Kernel::uniform(), 1.0) == doctest::Approx(0.00225).epsilon(1e-12));
  Grid coarse(15.0, 16);  // h = 1
  CHECK(cfl_dt(coarse, 1.0, Kernel::uniform(), 2.0) == doctest::Approx(0.225).epsilon(1e-12));
  CHECK_THROWS_AS(cfl_dt(g, 0.0, Kernel::uniform(), 1.0), std::invalid_argument);
}

TEST_CASE("step_n: zero is invariant and dt is gated") {
  Grid g(10.0, 400);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.1, false, true};
  GridFunction z = make_grid_function(g, 0.0);
  GridFunction out = step_n(z, cfg, cfl_dt(g, 1.0, cfg.kernel, 1.0));
  for (double v : out.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(step_n(z, cfg, 10.0 * g.spacing()), StabilityError);
}

TEST_CASE("one step from eta-mode data matches the exact solution to O(dt^2 + h dt)") {
  auto one_step_error = [](int n_nodes) {
    Grid g(20.0, n_nodes);
    Scenario sc = eta_mode(1.0, 1.0, g);
    SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.1, false, true};
    const double dt = cfl_dt(g, 1.0, cfg.kernel, 1.0);
    GridFunction n1 = step_n(sc.initial, cfg, dt);
    for (int i = 0; i < n1.size(); ++i) n1[i] -= sc.exact(dt, g.node(i));
    return std::pair{l1_norm(n1), dt * dt + g.spacing() * dt};
  };
  auto [e1, s1] = one_step_error(1000);
  auto [e2, s2] = one_step_error(2000);
  // consistency constant stays bounded across refinement
  CHECK(e1 <= 2.0 * s1);
  CHECK(e2 <= 2.0 * s2);
}

TEST_CASE("step_m gain term for equal mitosis is the closed composition form") {
  Grid g(16.0, 800);
  GridFunction m = sample(g, [](double x) { return x <= 4.0 ? x * (4.0 - x) : 0.0; });
  GridFunction bm = Kernel::equal_mitosis().apply_beta(m, 1.3);
  for (int i = 0; i < g.n_nodes(); i += 13)
    CHECK(bm[i] == doctest::Approx(2.0 * 1.3 * interpolate(m, 2.0 * g.node(i))).epsilon(1e-13));
}

TEST_CASE("run: t_end = 0 yields a single snapshot with the initial data") {
  Grid g(10.0, 300);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 0.0, 0.1, false, true};
  GridFunction n0 = sample(g, [](double x) { return x * std::exp(-x); });
  Trajectory traj = run(cfg, n0, std::nullopt);
  REQUIRE(traj.snapshots.size() == 1);
  CHECK(traj.snapshots[0].t == 0.0);
  for (int i = 0; i < g.n_nodes(); ++i) CHECK(traj.snapshots[0].n[i] == n0[i]);
}

TEST_CASE("run: steady initial data stays within the residual envelope") {
  Grid g(20.0, 1000);
  SteadyState st = steady_numeric(Kernel::uniform(), 1.0, g);
  const double t_end = 2.0;
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, t_end, 0.5, false, true};
  Trajectory traj = run(cfg, st.density.f, st.density);
  for (const auto& snap : traj.snapshots) {
    GridFunction d = snap.n;
    for (int i = 0; i < d.size(); ++i) d[i] -= st.density.f[i];
    CHECK(l1_norm(d) < 10.0 * st.residual_l1 * t_end);
  }
}

TEST_CASE("run: snapshot times are the requested cadence") {
  Grid g(10.0, 300);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.25, false, true};
  GridFunction n0 = sample(g, [](double x) { return x * std::exp(-x); });
  Trajectory traj = run(cfg, n0, std::nullopt);
  REQUIRE(traj.snapshots.size() == 5);
  for (size_t j = 0; j < traj.snapshots.size(); ++j)
    CHECK(traj.snapshots[j].t == doctest::Approx(0.25 * j).epsilon(1e-14));
}

TEST_CASE("run: forced unstable dt is refused upfront") {
  Grid g(10.0, 300);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 1.0, 1.0, 0.25, false, true};
  GridFunction n0 = sample(g, [](double x) { return x * std::exp(-x); });
  CHECK_THROWS_AS(run(cfg, n0, std::nullopt), StabilityError);
}

TEST_CASE("run: track_M without a reference is a missing-data error") {
  Grid g(10.0, 300);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.25, true, true};
  GridFunction n0 = sample(g, [](double x) { return x * std::exp(-x); });
  CHECK_THROWS_AS(run(cfg, n0, std::nullopt), MissingDataError);
}

TEST_CASE("run is linear when clipping is disabled") {
  Grid g(20.0, 800);
  SteadyState st = steady_explicit_uniform(1.0, g);
  GridFunction a = st.density.f;
  GridFunction b = sample_bump(g, BumpSpec{2.0, 2.0, 0.4});
  GridFunction combo = make_grid_function(g);
  for (int i = 0; i < combo.size(); ++i) combo[i] = 1.5 * a[i] - 2.0 * b[i];
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.25, false, false};
  Trajectory ta = run(cfg, a, std::nullopt);
  Trajectory tb = run(cfg, b, std::nullopt);
  Trajectory tc = run(cfg, combo, std::nullopt);
  double err = 0.0, scale = 0.0;
  for (size_t j = 0; j < tc.snapshots.size(); ++j)
    for (int i = 0; i < g.n_nodes(); ++i) {
      const double want = 1.5 * ta.snapshots[j].n[i] - 2.0 * tb.snapshots[j].n[i];
      err = std::max(err, std::abs(tc.snapshots[j].n[i] - want));
      scale = std::max(scale, std::abs(want));
    }
  CHECK(err <= 1e-10 * scale);
}

TEST_CASE("number conservation on a mid-resolution eta run") {
  Grid g(20.0, 1000);
  SteadyState ref = steady_numeric(Kernel::uniform(), 1.0, g);
  Scenario sc = eta_mode(1.0, 1.0, g);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 2.0, 0.5, false, true};
  Trajectory traj = run(cfg, sc.initial, ref.density);
  const double rho0 = traj.rho0;
  for (const auto& snap : traj.snapshots)
    CHECK(std::abs(integrate(snap.n) - rho0) < 5e-3 * rho0);
  // positivity: the monotone scheme never clips eta-mode data
  CHECK(traj.snapshots.back().clipped_cum == 0.0);
}

TEST_CASE("m_equation residual decreases at first order") {
  auto residual_at = [](int n_nodes) {
    Grid g(20.0, n_nodes);
    SteadyState ref = steady_numeric(Kernel::uniform(), 1.0, g);
    Scenario sc = eta_mode(1.0, 1.0, g);
    SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.5, true, true};
    Trajectory traj = run(cfg, sc.initial, ref.density);
    auto res = m_equation_residual(traj);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, r);
    return worst;
  };
  const double r1 = residual_at(1000);
  const double r2 = residual_at(2000);
  CHECK(r1 / r2 > 1.6);
}

TEST_CASE("M tracking commutes with the antiderivative of the density step") {
  Grid g(20.0, 1000);
  SteadyState ref = steady_numeric(Kernel::uniform(), 1.0, g);
  Scenario sc = eta_mode(1.0, 1.0, g);
  SimConfig cfg{Kernel::uniform(), 1.0, TauSpec{}, g, 0.0, 1.0, 0.5, true, false};
  const double dt = cfl_dt(g, 1.0, cfg.kernel, 1.0);
  GridFunction diff = sc.initial;
  for (int i = 0; i < diff.size(); ++i) diff[i] -= ref.density.f[i];
  GridFunction M = antiderivative(diff);
  GridFunction Ms = step_m(M, cfg, dt);
  GridFunction n1 = step_n(sc.initial, cfg, dt);
  for (int i = 0; i < n1.size(); ++i) n1[i] -= ref.density.f[i];
  GridFunction Ma = antiderivative(n1);
  for (int i = 0; i < Ms.size(); ++i) Ms[i] -= Ma[i];
  CHECK(l1_norm(Ms) <= 2.0 * dt * (g.spacing() + dt));
}

TEST_CASE("M-decay bound along a bump run for all kernels") {
  Grid g(20.0, 800);
  for (const Kernel& kern :
       {Kernel::uniform(), Kernel::equal_mitosis(), Kernel::general_mitosis(0.3)}) {
    SteadyState ref = steady_numeric(kern, 1.0, g);
    Scenario sc = perturbed_steady(kern, 1.0, 1.0, BumpSpec{1.0, 1.5, 0.05}, g, ref.density);
    SimConfig cfg{kern, 1.0, TauSpec{}, g, 0.0, 2.0, 0.25, true, true};
    Trajectory traj = run(cfg, sc.initial, ref.density);
    MDecayReport rep = m_decay_report(traj);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio <= rep.slack);
  }
}

TEST_CASE("tau family: saturating velocity keeps the theta decay") {
  Grid g(20.0, 800);
  SteadyState ref = steady_numeric(Kernel::equal_mitosis(), 1.0, g);
  Scenario sc = tau_scenario(1.0, 0.3, Kernel::equal_mitosis(), 1.0, g, ref.density, 1.0,
                             BumpSpec{1.0, 1.5, 0.05});
  SimConfig cfg{sc.kernel, sc.B, sc.tau, g, 0.0, 2.0, 0.25, true, true};
  Trajectory traj = run(cfg, sc.initial, ref.density);
  MDecayReport rep = m_decay_report(traj, sc.tau.theta(2.0, 1.0), 1.05);
  CHECK(rep.rate == doctest::Approx(0.7));
  CHECK(rep.pass);
}
