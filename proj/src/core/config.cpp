#include "config.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"

namespace gfkit {
namespace {

using nlohmann::json;

double require_positive(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing field '") + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0)) throw ConfigError(std::string("config: '") + key + "' must be > 0");
  return v;
}

Kernel parse_kernel(const json& j) {
  if (!j.contains("kernel")) throw ConfigError("config: missing field 'kernel'");
  const json& k = j.at("kernel");
  const std::string type = k.value("type", "");
  double sigma = k.value("sigma", 0.0);
  double alpha = k.value("alpha", 0.0);
  try {
    Kernel kernel = kernel_from_name(type, sigma, alpha);
    if (kernel.sigma_near_zero())
      std::cerr << "warning: sigma = " << sigma
                << " approaches the age-structure limit; results near sigma -> 0 are "
                   "outside the validated range\n";
    return kernel;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

AppConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  AppConfig cfg;
  try {
    cfg.kernel = parse_kernel(j);
    cfg.B = require_positive(j, "B");
    if (!j.contains("grid")) throw ConfigError("config: missing field 'grid'");
    const json& g = j.at("grid");
    const double x_max = require_positive(g, "x_max");
    if (!g.contains("n_nodes") || !g.at("n_nodes").is_number_integer())
      throw ConfigError("config: grid.n_nodes must be an integer");
    cfg.grid = Grid(x_max, g.at("n_nodes").get<int>());

    if (j.contains("tau")) {
      const json& t = j.at("tau");
      const std::string type = t.value("type", "constant");
      cfg.tau.tau0 = t.value("tau0", 1.0);
      if (type == "constant") {
        cfg.tau.s = 0.0;
      } else if (type == "saturating") {
        cfg.tau.s = t.value("s", 0.0);
      } else {
        throw ConfigError("config: tau.type must be 'constant' or 'saturating'");
      }
    }

    if (j.contains("dt")) {
      const json& d = j.at("dt");
      if (d.is_string() && d.get<std::string>() == "auto")
        cfg.dt = 0.0;
      else if (d.is_number())
        cfg.dt = d.get<double>();
      else
        throw ConfigError("config: dt must be a number or \"auto\"");
    }

    cfg.t_end = j.value("t_end", 0.0);
    cfg.snapshot_every = j.value("snapshot_every", 0.1);
    cfg.track_m = j.value("track_M", false);
    cfg.clip_negative = j.value("clip_negative", true);
    cfg.reference = j.value("reference", std::string("numeric"));
    if (cfg.reference != "numeric" && cfg.reference != "explicit" && cfg.reference != "none")
      throw ConfigError("config: reference must be numeric|explicit|none");

    if (j.contains("initial")) {
      const json& in = j.at("initial");
      cfg.initial.scenario = in.value("scenario", std::string("perturbed_steady"));
      cfg.initial.rho = in.value("rho", 1.0);
      cfg.initial.path = in.value("path", std::string());
      if (in.contains("bump")) {
        const json& b = in.at("bump");
        cfg.initial.bump.center = b.value("center", cfg.initial.bump.center);
        cfg.initial.bump.width = b.value("width", cfg.initial.bump.width);
        cfg.initial.bump.amplitude = b.value("amplitude", cfg.initial.bump.amplitude);
      }
    }

    if (j.contains("steady")) {
      const json& s = j.at("steady");
      cfg.steady.method = s.value("method", std::string("auto"));
      if (cfg.steady.method != "auto" && cfg.steady.method != "explicit" &&
          cfg.steady.method != "iterate")
        throw ConfigError("config: steady.method must be auto|explicit|iterate");
      cfg.steady.dt = s.value("dt", 0.0);
      cfg.steady.tol = s.value("tol", 1e-6);
      cfg.steady.max_steps = s.value("max_steps", static_cast<long>(2000000));
    }

    if (j.contains("verify")) cfg.verify_slack = j.at("verify").value("slack", 1.05);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_canonical_json(const AppConfig& c) {
  json j;
  j["kernel"]["type"] = c.kernel.name();
  if (c.kernel.variant() == KernelVariant::GeneralMitosis) j["kernel"]["sigma"] = c.kernel.sigma();
  if (c.kernel.variant() == KernelVariant::Homogeneous) j["kernel"]["alpha"] = c.kernel.alpha();
  j["B"] = c.B;
  j["grid"] = {{"x_max", c.grid.x_max()}, {"n_nodes", c.grid.n_nodes()}};
  j["tau"] = {{"type", c.tau.s > 0.0 ? "saturating" : "constant"},
              {"tau0", c.tau.tau0},
              {"s", c.tau.s}};
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["snapshot_every"] = c.snapshot_every;
  j["initial"] = {{"scenario", c.initial.scenario},
                  {"rho", c.initial.rho},
                  {"bump",
                   {{"center", c.initial.bump.center},
                    {"width", c.initial.bump.width},
                    {"amplitude", c.initial.bump.amplitude}}},
                  {"path", c.initial.path}};
  j["track_M"] = c.track_m;
  j["clip_negative"] = c.clip_negative;
  j["reference"] = c.reference;
  j["steady"] = {{"method", c.steady.method},
                 {"dt", c.steady.dt},
                 {"tol", c.steady.tol},
                 {"max_steps", c.steady.max_steps}};
  j["verify"] = {{"slack", c.verify_slack}};
  return j.dump();  // nlohmann keeps object keys sorted
}

std::uint64_t config_hash(const AppConfig& config) {
  // FNV-1a 64
  const std::string s = config_canonical_json(config);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

SteadyState solve_steady(const AppConfig& config) {
  std::string method = config.steady.method;
  if (method == "auto")
    method = config.kernel.variant() == KernelVariant::Uniform ? "explicit" : "iterate";
  if (method == "explicit") {
    if (config.kernel.variant() != KernelVariant::Uniform)
      throw ConfigError("config: the explicit steady state is only available for the uniform kernel");
    return steady_explicit_uniform(config.B, config.grid);
  }
  SteadyOptions opts{config.steady.dt, config.steady.tol, config.steady.max_steps};
  return steady_numeric(config.kernel, config.B, config.grid, opts);
}

ResolvedRun resolve_run(const AppConfig& config) {
  ResolvedRun out{SimConfig{config.kernel, config.B, config.tau, config.grid, config.dt,
                            config.t_end, config.snapshot_every, config.track_m,
                            config.clip_negative},
                  make_grid_function(config.grid),
                  std::nullopt,
                  config.initial.scenario,
                  std::nullopt,
                  nullptr};

  // Reference steady state (for diagnostics and M tracking).
  std::optional<SteadyState> ref;
  if (config.reference == "explicit") {
    if (config.kernel.variant() != KernelVariant::Uniform)
      throw ConfigError("config: reference 'explicit' requires the uniform kernel");
    ref = steady_explicit_uniform(config.B, config.grid);
  } else if (config.reference == "numeric") {
    SteadyOptions opts{config.steady.dt, config.steady.tol, config.steady.max_steps};
    ref = steady_numeric(config.kernel, config.B, config.grid, opts);
  } else if (config.track_m) {
    throw ConfigError("config: track_M requires a reference steady state");
  }

  const std::string& name = config.initial.scenario;
  if (name == "eta_mode") {
    if (config.kernel.variant() != KernelVariant::Uniform)
      throw ConfigError("config: eta_mode requires the uniform kernel");
    Scenario sc = eta_mode(config.B, config.initial.rho, config.grid);
    out.n0 = std::move(sc.initial);
    out.expected_rate = sc.expected_rate;
    out.exact = sc.exact;
    if (sc.expects_clipping)
      std::cerr << "warning: eta_mode initial data dips below zero; clipping expected\n";
  } else if (name == "xi_mode") {
    if (config.kernel.variant() != KernelVariant::EqualMitosis)
      throw ConfigError("config: xi_mode requires the equal_mitosis kernel");
    if (!ref || ref->method != SteadyMethod::LongTimeIteration)
      throw ConfigError("config: xi_mode requires reference = numeric");
    Scenario sc = xi_mode(config.B, config.initial.rho, config.grid, *ref);
    out.n0 = std::move(sc.initial);
    out.expected_rate = sc.expected_rate;
    out.exact = sc.exact;
    out.sim.clip_negative = false;  // signed eigenmode data
  } else if (name == "perturbed_steady") {
    if (!ref) throw ConfigError("config: perturbed_steady requires a reference steady state");
    Scenario sc = perturbed_steady(config.kernel, config.B, config.initial.rho,
                                   config.initial.bump, config.grid, ref->density);
    out.n0 = std::move(sc.initial);
    out.expected_rate = sc.expected_rate;
  } else if (name == "steady") {
    if (!ref) throw ConfigError("config: scenario 'steady' requires a reference steady state");
    out.n0 = ref->density.f;
    for (int i = 0; i < out.n0.size(); ++i) out.n0[i] *= config.initial.rho;
  } else if (name == "csv") {
    if (config.initial.path.empty()) throw ConfigError("config: initial.path missing for csv");
    out.n0 = read_grid_function_csv(config.initial.path, config.grid);
  } else {
    throw ConfigError("config: unknown scenario '" + name + "'");
  }

  if (ref) out.reference = ref->density;
  return out;
}

}  // namespace gfkit
