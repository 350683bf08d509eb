#pragma once

#include <string>
#include <vector>

#include "checks.hpp"
#include "config.hpp"
#include "diagnostics.hpp"

namespace gfkit {

extern const char* const kVersion;

/// Writes N.csv (x,value) plus a JSON sidecar {residual_l1, iterations, method}
/// at <out_csv>.json.
void run_steady_command(const AppConfig& config, const std::string& out_csv,
                        const std::string& sidecar_json);

/// Writes diagnostics.csv, snapshot CSVs n_<t>.csv (and m_<t>.csv when M is
/// tracked) and manifest.json under out_dir.
void run_evolve_command(const AppConfig& config, const std::string& out_dir);

RateFit run_rate_command(const std::string& diagnostics_csv, const std::string& column,
                         double t_lo, double t_hi);

PoincareReport run_counterexample_command(const AppConfig& config, const std::string& phi_name);

struct VerifyReport {
  bool all_pass;
  std::vector<CheckResult> checks;
  double slack;
  std::string config_hash_hex;
};

VerifyReport run_verify_command(const AppConfig& config, double slack,
                                const std::vector<std::string>& only);

std::string verify_report_json(const VerifyReport& report);

}  // namespace gfkit
