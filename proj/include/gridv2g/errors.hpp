#pragma once

#include <stdexcept>
#include <string>

namespace gridv2g {

// Three failure classes, mapped one-to-one onto CLI exit codes.

/// Bad or missing input data (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (exit code 3).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run that cannot produce the requested result, e.g. an unreachable
/// fleet-sizing target (exit code 1).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gridv2g
