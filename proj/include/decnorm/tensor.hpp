#pragma once

#include <vector>

#include "decnorm/algebra.hpp"
#include "decnorm/choi.hpp"

namespace decnorm {

/// z in M_n(V (x) W) with V, W each an algebra or its dual, stored as
/// coefficients z[i][j][p][q] against the matrix-unit (or dual) bases.
class TensorElement {
 public:
  TensorElement() = default;
  /// coeffs indexed ((i * n + j) * dim(left) + p) * dim(right) + q.
  TensorElement(Space left, Space right, int level, std::vector<cplx> coeffs);

  static TensorElement zero(const Space& left, const Space& right, int level);
  /// Level-1 elementary tensor with the given coordinates.
  static TensorElement elementary(const Space& left, const CVector& v, const Space& right, const CVector& w);
  /// sum_p e_p* (x) e_p on A* (x) A.
  static TensorElement identity(const Algebra& a);

  const Space& left() const noexcept { return left_; }
  const Space& right() const noexcept { return right_; }
  int level() const noexcept { return level_; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

  cplx operator()(int i, int j, int p, int q) const { return coeffs_[index(i, j, p, q)]; }
  cplx& operator()(int i, int j, int p, int q) { return coeffs_[index(i, j, p, q)]; }

  /// Slot (i, j) as a dim(left) x dim(right) coefficient matrix.
  CMatrix slot(int i, int j) const;

  TensorElement adjoint() const;
  bool is_self_adjoint(double tolerance = tol::kStructural) const;
  bool is_zero() const;
  double max_abs_coeff() const;
  /// Swaps the tensor factors.
  TensorElement flip() const;

  TensorElement operator+(const TensorElement& o) const;
  TensorElement operator-(const TensorElement& o) const;
  TensorElement operator*(cplx s) const;

 private:
  std::size_t index(int i, int j, int p, int q) const;

  Space left_;
  Space right_;
  int level_ = 1;
  std::vector<cplx> coeffs_;
};

/// Index of e_p* under the matrix-unit transposition within a block.
int star_index(const Algebra& a, int p);

/// Psi_n(z): A -> M_n(B) for z in M_n(A* (x) B); target is B.amplified(n).
LinMap associated_map(const TensorElement& z);
/// Inverse of associated_map for a map A -> right.amplified(n).
TensorElement tensor_of_map(const LinMap& t, const Algebra& right, int level);

/// Coefficients of alpha (v (x) w) beta*: v at level k, w at level l, alpha and beta n x kl.
TensorElement tensor_compress(const CMatrix& alpha, const LevelElement& v, const LevelElement& w,
                              const CMatrix& beta);

/// [[a, b], [c, d]] at level 2n.
TensorElement tensor_block(const TensorElement& a, const TensorElement& b, const TensorElement& c,
                           const TensorElement& d);

/// diag(z1, z2) at level n1 + n2.
TensorElement tensor_diag(const TensorElement& z1, const TensorElement& z2);

/// (Phi (x) id)(z) with Phi: left -> phi.target(); the left factor must be primal.
TensorElement apply_left(const LinMap& phi, const TensorElement& z);

}  // namespace decnorm
