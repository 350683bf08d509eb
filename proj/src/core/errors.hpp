#pragma once

#include <stdexcept>
#include <string>

namespace gfkit {

/// Configuration file / parameter validation failure.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Iteration did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

/// Timestep violates the stability bound, or a blow-up was detected.
class StabilityError : public std::runtime_error {
public:
  explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A diagnostic was requested on a trajectory that did not record the
/// required data (e.g. M-series diagnostics without track_M).
class MissingDataError : public std::runtime_error {
public:
  explicit MissingDataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gfkit
