// gfkit command-line tool. Talks to the core exclusively through the C API in
// gfkit.h; exit codes mirror gfkit_status (0 ok, 1 check failure, 2 config
// error, 3 convergence failure, 4 instability).

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfkit.h"

namespace {

int exit_code(gfkit_status st) {
  switch (st) {
    case GFKIT_OK: return 0;
    case GFKIT_CHECK_FAILED: return 1;
    case GFKIT_NO_CONVERGENCE: return 3;
    case GFKIT_UNSTABLE: return 4;
    case GFKIT_CONFIG_ERROR:
    case GFKIT_INVALID_ARGUMENT:
    case GFKIT_IO_ERROR:
    case GFKIT_MISSING_DATA:
    default: return 2;
  }
}

int report_failure(gfkit_status st) {
  std::fprintf(stderr, "gfkit: %s: %s\n", gfkit_status_name(st), gfkit_last_error());
  return exit_code(st);
}

using ConfigPtr = std::unique_ptr<gfkit_config, decltype(&gfkit_config_free)>;

ConfigPtr load_config_or_null(const std::string& path, gfkit_status* st) {
  gfkit_config* cfg = nullptr;
  *st = gfkit_config_load(path.c_str(), &cfg);
  return ConfigPtr(cfg, &gfkit_config_free);
}

bool parse_window(const std::string& text, double* lo, double* hi) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    *lo = std::stod(text.substr(0, colon));
    *hi = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    return false;
  }
  return *hi > *lo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growth-fragmentation equation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("gfkit ") + gfkit_version());

  std::string config_path, out_path, out_dir, in_path, column = "l1_dist";
  std::string window = "1:5", phi = "sin", checks;
  double slack = 0.0;

  auto* steady = app.add_subcommand("steady", "compute the steady state N");
  steady->add_option("--config", config_path, "JSON config file")->required();
  steady->add_option("--out", out_path, "output CSV path")->required();

  auto* evolve = app.add_subcommand("evolve", "run the time-dependent equation");
  evolve->add_option("--config", config_path, "JSON config file")->required();
  evolve->add_option("--out-dir", out_dir, "output directory")->required();

  auto* rate = app.add_subcommand("rate", "fit an exponential rate to a diagnostics column");
  rate->add_option("--in", in_path, "diagnostics.csv path")->required();
  rate->add_option("--column", column, "column name (default l1_dist)");
  rate->add_option("--window", window, "fit window t_lo:t_hi (default 1:5)");

  auto* verify = app.add_subcommand("verify", "run the certificate suite");
  verify->add_option("--config", config_path, "JSON config file")->required();
  verify->add_option("--slack", slack, "certificate slack (default from config, 1.05)");
  verify->add_option("--checks", checks, "comma-separated subset of checks");

  auto* counter = app.add_subcommand("counterexample", "Poincare counterexample report");
  counter->add_option("--config", config_path, "JSON config file")->required();
  counter->add_option("--phi", phi, "profile on [1,2]: sin|tent (default sin)");
  counter->add_option("--out", out_path, "optional JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  gfkit_status st = GFKIT_OK;

  if (steady->parsed()) {
    ConfigPtr cfg = load_config_or_null(config_path, &st);
    if (st != GFKIT_OK) return report_failure(st);
    st = gfkit_run_steady(cfg.get(), out_path.c_str(), (out_path + ".json").c_str());
    if (st != GFKIT_OK) return report_failure(st);
    std::printf("wrote %s and %s.json\n", out_path.c_str(), out_path.c_str());
    return 0;
  }

  if (evolve->parsed()) {
    ConfigPtr cfg = load_config_or_null(config_path, &st);
    if (st != GFKIT_OK) return report_failure(st);
    st = gfkit_run_evolve(cfg.get(), out_dir.c_str());
    if (st != GFKIT_OK) return report_failure(st);
    std::printf("wrote %s/diagnostics.csv\n", out_dir.c_str());
    return 0;
  }

  if (rate->parsed()) {
    double lo = 0.0, hi = 0.0;
    if (!parse_window(window, &lo, &hi)) {
      std::fprintf(stderr, "gfkit: bad --window '%s' (expected t_lo:t_hi)\n", window.c_str());
      return 2;
    }
    double lambda = 0, intercept = 0, r2 = 0;
    int floor_hit = 0;
    st = gfkit_fit_rate_csv(in_path.c_str(), column.c_str(), lo, hi, &lambda, &intercept,
                            &r2, &floor_hit);
    if (st != GFKIT_OK) return report_failure(st);
    nlohmann::json j = {{"lambda", lambda},
                        {"intercept", intercept},
                        {"r_squared", r2},
                        {"window", {lo, hi}},
                        {"column", column},
                        {"floor_hit", floor_hit != 0}};
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }

  if (verify->parsed()) {
    ConfigPtr cfg = load_config_or_null(config_path, &st);
    if (st != GFKIT_OK) return report_failure(st);
    char* report = nullptr;
    st = gfkit_verify(cfg.get(), slack, checks.empty() ? nullptr : checks.c_str(), &report);
    if (st != GFKIT_OK && st != GFKIT_CHECK_FAILED) return report_failure(st);
    nlohmann::json j = nlohmann::json::parse(report);
    gfkit_string_free(report);
    std::printf("%-26s %-6s %s\n", "check", "result", "detail");
    for (const auto& c : j.at("checks"))
      std::printf("%-26s %-6s %s\n", c.at("name").get<std::string>().c_str(),
                  c.at("pass").get<bool>() ? "PASS" : "FAIL",
                  c.at("detail").get<std::string>().c_str());
    std::printf("overall: %s\n", j.at("all_pass").get<bool>() ? "PASS" : "FAIL");
    return exit_code(st);
  }

  if (counter->parsed()) {
    ConfigPtr cfg = load_config_or_null(config_path, &st);
    if (st != GFKIT_OK) return report_failure(st);
    double d2 = 0, variance = 0, ratio = 0;
    st = gfkit_poincare_counterexample(cfg.get(), phi.c_str(), &d2, &variance, &ratio);
    if (st != GFKIT_OK) return report_failure(st);
    nlohmann::json j = {{"d2", d2}, {"variance", variance}, {"ratio", ratio}, {"phi", phi}};
    const std::string text = j.dump(2);
    if (!out_path.empty()) {
      FILE* f = std::fopen(out_path.c_str(), "w");
      if (!f) {
        std::fprintf(stderr, "gfkit: cannot write %s\n", out_path.c_str());
        return 2;
      }
      std::fprintf(f, "%s\n", text.c_str());
      std::fclose(f);
    }
    std::printf("%s\n", text.c_str());
    return 0;
  }

  return 2;
}
