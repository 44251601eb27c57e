#include "decnorm/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "decnorm/errors.hpp"

namespace decnorm {

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DomainError("HermitianMatrix: matrix is not square");
  }
  m_ = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim));
}

EigenDecomposition eig_hermitian(const HermitianMatrix& m) {
  const auto n = m.dim();
  if (n == 0) return {RVector(0), CMatrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    const double residual =
        (solver.eigenvectors() * solver.eigenvalues().asDiagonal() * solver.eigenvectors().adjoint() -
         m.matrix())
            .cwiseAbs()
            .maxCoeff();
    throw SolverFailure("eig_hermitian: eigensolver did not converge", -1, residual);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PsdCheck psd_check(const HermitianMatrix& m, double tolerance) {
  if (tolerance < 0) throw DomainError("psd_check: tolerance must be non-negative");
  if (m.dim() == 0) return {true, 0.0};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("psd_check: eigensolver did not converge");
  }
  const double min_eig = solver.eigenvalues()(0);
  return {min_eig >= -tolerance, min_eig};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector(0);
  // Gram matrix on the smaller side.
  const CMatrix gram = m.rows() < m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(gram), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverFailure("singular_values: eigensolver did not converge");
  }
  RVector ev = solver.eigenvalues();
  RVector sv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    sv(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
  }
  return sv;
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  // The Gram route squares the condition number; refine with a direct SVD
  // for the top singular value, which is well-conditioned.
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

Eigen::MatrixXd real_embedding(const CMatrix& m) {
  Eigen::MatrixXd out(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double a = m(i, j).real();
      const double b = m(i, j).imag();
      out(2 * i, 2 * j) = a;
      out(2 * i, 2 * j + 1) = -b;
      out(2 * i + 1, 2 * j) = b;
      out(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& m) {
  if (m.rows() == 0) return m;
  const auto ed = eig_hermitian(HermitianMatrix(m));
  RVector s = ed.values.cwiseMax(0.0).cwiseSqrt();
  return ed.vectors * s.asDiagonal() * ed.vectors.adjoint();
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace decnorm
