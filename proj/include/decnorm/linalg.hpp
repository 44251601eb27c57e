#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace decnorm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kStructural = 1e-12;
inline constexpr double kPsd = 1e-8;
inline constexpr double kSolver = 1e-9;
}  // namespace tol

/// A square complex matrix whose Hermitian symmetry is enforced at
/// construction: the stored entries are (M + M*)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);
  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;  // ascending
  CMatrix vectors; // columns are eigenvectors
};

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
/// Throws SolverFailure if the iteration does not converge.
EigenDecomposition eig_hermitian(const HermitianMatrix& m);

struct PsdCheck {
  bool is_psd;
  double min_eig;
};

/// is_psd <=> min_eig >= -tolerance. Zero-dimensional input is PSD with min_eig 0.
PsdCheck psd_check(const HermitianMatrix& m, double tolerance = tol::kPsd);

CMatrix kron(const CMatrix& a, const CMatrix& b);

double op_norm(const CMatrix& m);
double trace_norm(const CMatrix& m);

/// Singular values (descending) computed from the eigenvalues of M*M.
RVector singular_values(const CMatrix& m);

/// a + bi  ->  [[a, -b], [b, a]] applied entrywise; a Hermitian d x d matrix
/// maps to a real symmetric 2d x 2d matrix whose spectrum is the original
/// spectrum with every eigenvalue doubled.
Eigen::MatrixXd real_embedding(const CMatrix& m);

/// Positive square root and inverse square root of a PSD Hermitian matrix.
CMatrix psd_sqrt(const CMatrix& m);

double max_abs(const CMatrix& m);

inline CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace decnorm
