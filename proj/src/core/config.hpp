#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "evolve.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "scenarios.hpp"
#include "steady.hpp"

namespace gfkit {

struct InitialSpec {
  std::string scenario = "perturbed_steady";  // eta_mode|xi_mode|perturbed_steady|steady|csv
  double rho = 1.0;
  BumpSpec bump;
  std::string path;  // for scenario "csv"
};

struct SteadyConfig {
  std::string method = "auto";  // auto|explicit|iterate
  double dt = 0.0;
  double tol = 1e-6;
  long max_steps = 2000000;
};

/// One JSON document drives every subcommand; physical parameters are
/// explicit, the only autos are the documented dt and reference policies.
struct AppConfig {
  Kernel kernel = Kernel::uniform();
  double B = 1.0;
  Grid grid{20.0, 4000};
  TauSpec tau;
  double dt = 0.0;  // 0 = auto (cfl_dt)
  double t_end = 0.0;
  double snapshot_every = 0.1;
  InitialSpec initial;
  bool track_m = false;
  bool clip_negative = true;
  std::string reference = "numeric";  // numeric|explicit|none
  SteadyConfig steady;
  double verify_slack = 1.05;
};

AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::string& path);

/// Canonical serialized form (sorted keys) used for the manifest hash.
std::string config_canonical_json(const AppConfig& config);
std::uint64_t config_hash(const AppConfig& config);

/// Steady-state solve for the `steady` subcommand, honoring config.steady.
SteadyState solve_steady(const AppConfig& config);

struct ResolvedRun {
  SimConfig sim;
  GridFunction n0;
  std::optional<Density> reference;
  std::string scenario_name;
  std::optional<double> expected_rate;
  std::function<double(double, double)> exact;
};

/// Builds the scenario initial data and the reference steady state. The
/// trajectory reference is the long-time-iteration profile by default so the
/// l1_dist series decays to the discrete fixed point rather than flooring at
/// the O(h) profile difference of a closed form.
ResolvedRun resolve_run(const AppConfig& config);

}  // namespace gfkit
