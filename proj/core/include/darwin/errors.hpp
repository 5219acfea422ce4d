#pragma once

#include <stdexcept>
#include <string>

namespace darwin {

// Two failure families. The CLI maps ValidationError to exit code 2 and
// NumericalError to exit code 3.

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two particles share a position and no softening is configured.
class CoincidentParticles : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ThinWireAssumptionViolated : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A periodic Poisson problem was posed with a density of nonzero mean.
class NonzeroNetCharge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GridMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Scenario text could not be parsed. Carries a 1-based line and column.
class SyntaxError : public ValidationError {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The velocity-coupling matrix lost positive definiteness. The state has
/// left the regime where the order-(v/c)^2 Lagrangian is meaningful.
class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverDidNotConverge : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FixedPointDidNotConverge : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace darwin
