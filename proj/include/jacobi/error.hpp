#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An evaluation that did not reach its accuracy target (series cap, quadrature residual).
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Intermediate quantities left the representable range.
class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Malformed experiment description (unknown keys, missing fields, bad ranges).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace jacobi
