#pragma once

#include <stdexcept>
#include <string>

namespace measuretherm {

/// User-supplied configuration (dimensions, parameters, schedules) is inconsistent.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical invariant (hermiticity, positivity, completeness, ...) failed.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measurement-scheme stages were driven out of order.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace measuretherm
