#pragma once

#include <string>
#include <utility>
#include <vector>

#include "decnorm/linalg.hpp"

namespace decnorm {

/// A finite-dimensional C*-algebra  M_{n_1} (+) ... (+) M_{n_k}.
///
/// Elements are block-diagonal matrices of side sum(n_b). The canonical
/// basis is the list of matrix units e^{(b)}_{ij}, block-major then
/// row-major; every coefficient array in the library refers to it.
class Algebra {
 public:
  Algebra() = default;
  explicit Algebra(std::vector<int> blocks);

  static Algebra full(int d) { return Algebra({d}); }
  static Algebra diagonal(int n) { return Algebra(std::vector<int>(static_cast<std::size_t>(n), 1)); }

  const std::vector<int>& blocks() const noexcept { return blocks_; }
  int num_blocks() const noexcept { return static_cast<int>(blocks_.size()); }
  int block_size(int b) const { return blocks_.at(static_cast<std::size_t>(b)); }
  int block_offset(int b) const { return offsets_.at(static_cast<std::size_t>(b)); }
  /// Total side of the block-diagonal embedding.
  int side() const noexcept { return side_; }
  /// Vector-space dimension sum(n_b^2).
  int dim() const noexcept { return dim_; }

  struct Unit {
    int block, row, col;
  };
  Unit unit_of(int p) const;
  int index_of(int block, int row, int col) const;
  /// First basis index of block b.
  int basis_offset(int b) const { return basis_offsets_.at(static_cast<std::size_t>(b)); }

  CMatrix unit(int p) const;
  CMatrix identity() const { return CMatrix::Identity(side_, side_); }
  CMatrix zero() const { return CMatrix::Zero(side_, side_); }
  CMatrix block(const CMatrix& a, int b) const;

  CVector coords(const CMatrix& a) const;
  CMatrix from_coords(const CVector& c) const;

  /// True when every entry outside the diagonal blocks is exactly zero.
  bool respects_support(const CMatrix& a) const;
  /// Zero every entry outside the diagonal blocks.
  CMatrix project(const CMatrix& a) const;

  /// M_n(A) as an algebra: blocks n * n_b, ordered (slot, local) inside each block.
  Algebra amplified(int n) const;

  /// Permutation from the slot ordering of M_n(A) (index i*side + x) to the
  /// block ordering of amplified(n). perm[slot_index] = block_index.
  std::vector<int> slot_to_block_permutation(int n) const;
  CMatrix slot_to_block(const CMatrix& slot_matrix, int n) const;
  CMatrix block_to_slot(const CMatrix& block_matrix, int n) const;

  bool operator==(const Algebra& o) const noexcept { return blocks_ == o.blocks_; }
  bool operator!=(const Algebra& o) const noexcept { return !(*this == o); }

  std::string describe() const;

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  std::vector<int> basis_offsets_;
  int side_ = 0;
  int dim_ = 0;
};

/// A matrix regular operator space: an algebra A or its trace dual A*.
///
/// On the dual side a functional f is stored through its density F with
/// f(a) = sum_b trace(F_b a_b) (unnormalised trace). The dual basis
/// functional eps_{(b,i,j)} : a -> a^{(b)}_{ij} has density e^{(b)}_{ji}.
struct Space {
  Algebra base;
  bool is_dual = false;

  static Space primal(Algebra a) { return {std::move(a), false}; }
  static Space dual(Algebra a) { return {std::move(a), true}; }

  int dim() const noexcept { return base.dim(); }
  bool operator==(const Space& o) const noexcept { return base == o.base && is_dual == o.is_dual; }
  bool operator!=(const Space& o) const noexcept { return !(*this == o); }
  std::string describe() const;
};

class LinMap;

/// An element of M_n(V) for V = A or A*, stored as an (n*side) x (n*side)
/// matrix in slot ordering; slot (i, j) holds the block-diagonal matrix
/// of v_ij (primal) or its density (dual).
class LevelElement {
 public:
  /// The zero scalar (level 1 over C).
  LevelElement();
  LevelElement(Space space, int level, CMatrix matrix);

  static LevelElement zero(const Space& space, int level);
  /// The unit 1 (x) I_n of M_n(A); on the dual side the unnormalised trace.
  static LevelElement unit(const Space& space, int level);
  /// Element of M_n(V) from its slot coordinates c[(i*n + j)*dim + p].
  static LevelElement from_coords(const Space& space, int level, const CVector& coords);

  const Space& space() const noexcept { return space_; }
  int level() const noexcept { return level_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

  /// Coordinates of slot (i, j) in the canonical (dual) basis.
  CVector slot_coords(int i, int j) const;
  CVector coords() const;

  LevelElement adjoint() const;
  bool is_self_adjoint(double tolerance = tol::kStructural) const;

  LevelElement operator+(const LevelElement& o) const;
  LevelElement operator-(const LevelElement& o) const;
  LevelElement operator*(cplx s) const;

  /// Dual side only: the associated map base -> M_n, a -> [f_ij(a)].
  LinMap as_map() const;
  /// Inverse of as_map for maps A -> M_n (target algebra [n]).
  static LevelElement from_map(const LinMap& map);

 private:
  Space space_;
  int level_;
  CMatrix matrix_;
};

/// Operator norm (primal) or cb norm of the associated map (dual).
double level_norm(const LevelElement& x);
/// PSD test (primal) or Choi-PSD test of the associated map (dual).
bool level_positive(const LevelElement& x, double tolerance = tol::kPsd);
/// alpha* x alpha, alpha of shape level(x) x m.
LevelElement compress(const LevelElement& x, const CMatrix& alpha);

struct RegularityWitness {
  LevelElement a;
  LevelElement d;
  /// [[a, x], [x*, d]] at level 2n.
  LevelElement block;
};

/// For ||x|| < 1 returns positive a, d with norms < 1 such that
/// [[a, x], [x*, d]] is positive at level 2n.
RegularityWitness regularity_witness(const LevelElement& x);

/// [[a, b], [c, d]] at level 2n.
LevelElement block_matrix(const LevelElement& a, const LevelElement& b, const LevelElement& c,
                          const LevelElement& d);

/// The dual element of a block-diagonal matrix, block-by-block transposed
/// so that  eps-coordinates of the result equal the input coordinates.
CMatrix density_of_coords(const Algebra& a, const CVector& c);
CVector coords_of_density(const Algebra& a, const CMatrix& density);

}  // namespace decnorm
