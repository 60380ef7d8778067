#pragma once

#include <stdexcept>
#include <string>

namespace semilevy {

/// Malformed model, schedule or configuration. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A routine was called outside its domain (wrong dimension, missing mean, ...).
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A numerical procedure failed to reach its stated accuracy. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace semilevy
