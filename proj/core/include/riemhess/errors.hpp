#pragma once

#include <stdexcept>
#include <string>

namespace riemhess {

/// Operand shapes do not agree (wrong rows/cols, non-square input, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad metric or problem parameters, rejected at construction.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point or vector fails its manifold invariant.
class InvariantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Factorization failed (rank loss, non-finite entries, ill-posed solve).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative inner solve stopped without meeting its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (relative residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The ambient structure lacks the callbacks an operation needs.
class UnsupportedStructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace riemhess
