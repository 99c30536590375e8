#pragma once

#include <stdexcept>
#include <string>

namespace selfprop {

/// Process exit codes used by the command-line driver.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 2,
  kInvariant = 3,
  kNumerical = 4,
  kComparison = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

/// A monitored physical invariant (maximum principle, stability bound, ...) failed.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ExitCode::kInvariant, what) {}
};

/// NaN/Inf appeared, or an iterative solver did not converge.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ExitCode::kNumerical, what) {}
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Phase-field result disagrees with the reference solution beyond tolerance.
class ComparisonError : public Error {
 public:
  explicit ComparisonError(const std::string& what) : Error(ExitCode::kComparison, what) {}
};

}  // namespace selfprop
