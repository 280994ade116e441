#pragma once

#include <stdexcept>
#include <string>

namespace dtsim {

// A broken simulator invariant (past scheduling, double admit, ...). Fatal for the run.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Rejected configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtsim
