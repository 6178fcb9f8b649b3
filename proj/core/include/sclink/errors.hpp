#pragma once

#include <stdexcept>
#include <string>

namespace sclink {

/// Bad input: malformed tables, invalid configs, out-of-range queries.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query outside a tabulated domain. No extrapolation is ever performed.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure: boundary iteration did not converge, negative power, etc.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace sclink
