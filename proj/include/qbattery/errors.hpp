#pragma once

#include <stdexcept>
#include <string>

namespace qbattery {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or invalid dimensions (fock cutoff, ion count, operand sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Site, level or basis index outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A state or amplitude set that is not unit-normalized.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Numerical consistency failure: non-Hermitian input, negative ergotropy
/// beyond tolerance, Krylov substep underflow, ...
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters (coincident ions, negative exponent, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Configuration parse failure. Always names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error("config key '" + key + "': " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qbattery
