#pragma once

#include <string>
#include <vector>

#include "decnorm/linalg.hpp"

namespace decnorm {

/// One entry of a coefficient matrix attached to variable `var`.
/// A functional built from entries H contributes Re tr(H X) = Re sum H(r,c) X(c,r).
/// Only the Hermitian part of H matters; the solver symmetrizes on entry.
struct SdpTerm {
  int var = 0;
  int row = 0;
  int col = 0;
  cplx value{0.0, 0.0};
};

struct SdpConstraint {
  std::vector<SdpTerm> terms;
  double rhs = 0.0;
};

enum class SdpSense { minimize, maximize };
enum class SdpStatus { optimal, infeasible, unbounded, max_iter };

std::string to_string(SdpStatus s);
std::string to_string(SdpSense s);

struct SdpProblem {
  std::vector<int> dims;
  std::vector<SdpTerm> objective;
  std::vector<SdpConstraint> constraints;
  SdpSense sense = SdpSense::minimize;

  int add_variable(int dim);
  void add_objective(int var, int row, int col, cplx value);
  /// Adds Re tr(h X_var) to the objective.
  void add_objective_matrix(int var, const CMatrix& h);
  /// Re tr(h X_var) as a term list.
  static std::vector<SdpTerm> matrix_terms(int var, const CMatrix& h);
  /// Terms reading Re X(r,c) and Im X(r,c).
  static std::vector<SdpTerm> real_entry(int var, int r, int c);
  static std::vector<SdpTerm> imag_entry(int var, int r, int c);
  void add_constraint(std::vector<SdpTerm> terms, double rhs);

  /// Throws DomainError on out-of-range indices, NaN/Inf data or no variables.
  void validate() const;
};

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iter = 100;
};

struct SdpSolution {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  std::vector<CMatrix> variable_values;
  /// Dual slack per variable, for the minimization form of the problem.
  std::vector<CMatrix> dual_slacks;
  /// Multipliers for the constraints as given (dropped rows get 0).
  RVector multipliers;
  SdpStatus status = SdpStatus::max_iter;
  int iterations = 0;
  bool dropped_rows = false;
};

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

struct SdpCertificate {
  double primal_feas = 0.0;
  double dual_feas = 0.0;
  double gap = 0.0;
};

/// Recomputes residuals of s against p without using solver state.
/// primal_feas: max of the relative equality residual and the most negative
/// eigenvalue of any X. dual_feas: most negative eigenvalue of C - A*(y),
/// relative to 1 + ||C||. gap: relative objective gap.
SdpCertificate check_certificate(const SdpProblem& p, const SdpSolution& s);

/// Value of Re tr(H X) summed over terms.
double evaluate_terms(const std::vector<SdpTerm>& terms, const std::vector<CMatrix>& x);

}  // namespace decnorm
