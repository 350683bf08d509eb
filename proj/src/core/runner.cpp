#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"

namespace gfkit {

const char* const kVersion = "0.1.0";

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string snapshot_name(const char* prefix, double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s_%010.6f.csv", prefix, t);
  return buf;
}

const char* method_name(SteadyMethod m) {
  return m == SteadyMethod::Explicit ? "explicit" : "long_time_iteration";
}

}  // namespace

void run_steady_command(const AppConfig& config, const std::string& out_csv,
                        const std::string& sidecar_json) {
  SteadyState st = solve_steady(config);
  write_grid_function_csv(out_csv, st.density.f);
  json side = {{"residual_l1", st.residual_l1},
               {"iterations", st.iterations},
               {"method", method_name(st.method)}};
  std::ofstream out(sidecar_json);
  if (!out) throw IoError("cannot write " + sidecar_json);
  out << side.dump(2) << '\n';
}

void run_evolve_command(const AppConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);

  const std::string started = iso_timestamp();
  ResolvedRun rr = resolve_run(config);
  Trajectory traj = run(rr.sim, rr.n0, rr.reference);
  auto rows = diagnostics_table(traj);

  std::vector<std::string> outputs;
  const std::vector<std::string> header = {
      "t",   "number",           "mass",
      "l1_dist", "log_l1_dist",  "m_l1",
      "entropy_quadratic", "dissipation_quadratic", "bound_value",
      "tail_mass", "clipped_mass"};
  std::vector<std::vector<double>> data;
  for (const auto& r : rows)
    data.push_back({r.t, r.number, r.mass, r.l1_dist, r.log_l1_dist, r.m_l1,
                    r.entropy_quadratic, r.dissipation_quadratic, r.bound_value, r.tail_mass,
                    r.clipped_mass});
  const std::string diag_path = (fs::path(out_dir) / "diagnostics.csv").string();
  write_csv(diag_path, header, data);
  outputs.push_back("diagnostics.csv");

  for (const auto& snap : traj.snapshots) {
    const std::string nname = snapshot_name("n", snap.t);
    write_grid_function_csv((fs::path(out_dir) / nname).string(), snap.n);
    outputs.push_back(nname);
    if (snap.m) {
      const std::string mname = snapshot_name("m", snap.t);
      write_grid_function_csv((fs::path(out_dir) / mname).string(), *snap.m);
      outputs.push_back(mname);
    }
  }

  json manifest = {{"tool", "gfkit"},
                   {"version", kVersion},
                   {"config_hash", hex64(config_hash(config))},
                   {"started", started},
                   {"finished", iso_timestamp()},
                   {"scenario", rr.scenario_name},
                   {"outputs", outputs},
                   {"summary",
                    {{"completed", true},
                     {"snapshots", traj.snapshots.size()},
                     {"clipped_mass", traj.snapshots.back().clipped_cum},
                     {"dt", traj.dt_used}}}};
  std::ofstream mout(fs::path(out_dir) / "manifest.json");
  if (!mout) throw IoError("cannot write manifest.json");
  mout << manifest.dump(2) << '\n';
}

RateFit run_rate_command(const std::string& diagnostics_csv, const std::string& column,
                         double t_lo, double t_hi) {
  CsvTable table = read_csv(diagnostics_csv);
  const int tc = table.column("t");
  const int vc = table.column(column);
  if (tc < 0) throw IoError(diagnostics_csv + ": no 't' column");
  if (vc < 0) throw IoError(diagnostics_csv + ": no '" + column + "' column");
  std::vector<double> ts, vs;
  for (const auto& row : table.rows) {
    ts.push_back(row[static_cast<size_t>(tc)]);
    vs.push_back(row[static_cast<size_t>(vc)]);
  }
  return fit_rate(ts, vs, t_lo, t_hi);
}

PoincareReport run_counterexample_command(const AppConfig& config,
                                          const std::string& phi_name) {
  std::function<double(double)> phi;
  if (phi_name == "sin" || phi_name.empty()) {
    phi = [](double s) { return std::sin(2.0 * std::numbers::pi * std::log2(s)); };
  } else if (phi_name == "tent") {
    phi = [](double s) { return 1.0 - std::abs(2.0 * s - 3.0); };
  } else {
    throw ConfigError("unknown phi '" + phi_name + "' (expected sin|tent)");
  }
  AppConfig cfg = config;
  cfg.kernel = Kernel::equal_mitosis();  // the counterexample lives on equal mitosis
  SteadyOptions opts{cfg.steady.dt, cfg.steady.tol, cfg.steady.max_steps};
  SteadyState st = steady_numeric(cfg.kernel, cfg.B, cfg.grid, opts);
  return poincare_counterexample(phi, cfg.grid, cfg.B, st.density);
}

VerifyReport run_verify_command(const AppConfig& config, double slack,
                                const std::vector<std::string>& only) {
  CheckOptions opts;
  opts.B = config.B;
  opts.n_nodes = config.grid.n_nodes();
  opts.x_max_factor = config.grid.x_max() * config.B;
  opts.slack = slack > 0.0 ? slack : config.verify_slack;
  opts.steady_tol = config.steady.tol;
  opts.only = only;
  std::vector<CheckResult> checks = run_acceptance_checks(opts);
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  return VerifyReport{all, std::move(checks), opts.slack, hex64(config_hash(config))};
}

std::string verify_report_json(const VerifyReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"criterion", c.criterion},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  json j = {{"tool", "gfkit"},
            {"version", kVersion},
            {"config_hash", report.config_hash_hex},
            {"slack", report.slack},
            {"all_pass", report.all_pass},
            {"checks", checks}};
  return j.dump(2);
}

}  // namespace gfkit
