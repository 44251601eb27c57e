#pragma once

#include <stdexcept>
#include <string>

namespace decnorm {

/// Inputs that violate a documented shape or precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed command line or input file.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside an iterative routine (eigensolver, SDP).
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, int iteration = -1, double residual = 0.0)
      : std::runtime_error(what), iteration_(iteration), residual_(residual) {}

  int iteration() const noexcept { return iteration_; }
  double residual() const noexcept { return residual_; }

 private:
  int iteration_;
  double residual_;
};

}  // namespace decnorm
