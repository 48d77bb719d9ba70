#pragma once

#include <stdexcept>
#include <string>

namespace qradar {

/// Invalid user input: malformed config, out-of-range scenario field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a physical quantity was violated.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature or linear-algebra failure. The message carries diagnostics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qradar
