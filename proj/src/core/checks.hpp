#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace gfkit {

struct CheckResult {
  std::string name;
  int criterion;  // 1-based index in the certificate suite
  bool pass;
  std::string detail;  // measured values and thresholds
};

struct CheckOptions {
  double B = 1.0;
  int n_nodes = 4000;
  double x_max_factor = 20.0;  // grid is [0, x_max_factor / B]
  double slack = 1.05;
  double steady_tol = 1e-6;
  std::vector<std::string> only;  // empty = every check
};

const std::vector<std::string>& acceptance_check_names();

/// Runs the certificate suite. Thresholds are fixed here; a failing entry
/// reports its measured value alongside the gate it missed.
std::vector<CheckResult> run_acceptance_checks(const CheckOptions& opts = {});

}  // namespace gfkit
