#pragma once

#include <functional>
#include <vector>

#include "decnorm/algebra.hpp"

namespace decnorm {

/// A linear map between finite-dimensional C*-algebras.
///
/// Stored as one Choi block per (source block b, target block c):
///   C^{(b,c)} = sum_{ij} e_ij (x) T(e^{(b)}_ij)_c      (size n_b m_c),
/// indexed (source row, target row) -> i * m_c + r.
class LinMap {
 public:
  LinMap() = default;
  /// Choi blocks in order b * target.num_blocks() + c.
  LinMap(Algebra source, Algebra target, std::vector<CMatrix> choi);

  /// From the images of the canonical basis (block-diagonal target matrices).
  static LinMap from_images(const Algebra& source, const Algebra& target,
                            const std::vector<CMatrix>& images);
  static LinMap from_function(const Algebra& source, const Algebra& target,
                              const std::function<CMatrix(const CMatrix&)>& f);
  /// From coefficients K(p, q) = q-th coordinate of T(e_p).
  static LinMap from_coefficients(const Algebra& source, const Algebra& target, const CMatrix& k);

  static LinMap identity(const Algebra& a);
  static LinMap zero(const Algebra& source, const Algebra& target);
  /// a -> a^T blockwise.
  static LinMap transpose(const Algebra& a);

  const Algebra& source() const noexcept { return source_; }
  const Algebra& target() const noexcept { return target_; }
  const CMatrix& choi(int b, int c) const;
  const std::vector<CMatrix>& choi_blocks() const noexcept { return choi_; }

  CMatrix apply(const CMatrix& a) const;
  CMatrix image(int p) const;
  CMatrix coefficients() const;

  LinMap operator+(const LinMap& o) const;
  LinMap operator-(const LinMap& o) const;
  LinMap operator*(cplx s) const;

 private:
  Algebra source_;
  Algebra target_;
  std::vector<CMatrix> choi_;
};

/// T*(a) = T(a*)*.
LinMap adjoint_map(const LinMap& t);
/// id_{M_n} (x) T : M_n(A) -> M_n(B).
LinMap amplify(const LinMap& t, int n);
/// s o t.
LinMap compose(const LinMap& s, const LinMap& t);

bool is_cp(const LinMap& t, double tolerance = tol::kPsd);
/// cp and ||T(1)|| <= 1 + tolerance.
bool is_ccp(const LinMap& t, double tolerance = tol::kPsd);
/// Smallest eigenvalue over all Choi blocks.
double choi_min_eig(const LinMap& t);
/// ||T(1)||, the cb norm of a cp map.
double unit_image_norm(const LinMap& t);

/// Similarity by the permutation that reorders tensor factors: output
/// factor k is input factor perm[k].
CMatrix canonical_shuffle(const CMatrix& m, const std::vector<int>& dims, const std::vector<int>& perm);

/// v -> [[S1(v), T(v)], [T*(v), S2(v)]] into M_2(target).
LinMap block2x2(const LinMap& s1, const LinMap& t, const LinMap& s2);

/// Choi block (b, c) of block2x2 rearranged as [[C_S1, C_T], [C_T*, C_S2]].
CMatrix block2x2_arranged_choi(const LinMap& s1, const LinMap& t, const LinMap& s2, int b, int c);

/// Pointwise maximum deviation between two maps' Choi blocks.
double map_distance(const LinMap& a, const LinMap& b);

}  // namespace decnorm
