#include "decnorm/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "decnorm/errors.hpp"

namespace decnorm {

TensorElement::TensorElement(Space left, Space right, int level, std::vector<cplx> coeffs)
    : left_(std::move(left)), right_(std::move(right)), level_(level), coeffs_(std::move(coeffs)) {
  if (level_ < 1) throw DomainError("TensorElement: level must be >= 1");
  const std::size_t expect =
      static_cast<std::size_t>(level_) * level_ * static_cast<std::size_t>(left_.dim()) * right_.dim();
  if (coeffs_.size() != expect) {
    throw DomainError("TensorElement: expected " + std::to_string(expect) + " coefficients, got " +
                      std::to_string(coeffs_.size()));
  }
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("TensorElement: non-finite coefficient");
}

std::size_t TensorElement::index(int i, int j, int p, int q) const {
  return ((static_cast<std::size_t>(i) * level_ + j) * left_.dim() + p) * right_.dim() + q;
}

TensorElement TensorElement::zero(const Space& left, const Space& right, int level) {
  return {left, right, level,
          std::vector<cplx>(static_cast<std::size_t>(level) * level * left.dim() * right.dim(), cplx(0.0))};
}

TensorElement TensorElement::elementary(const Space& left, const CVector& v, const Space& right, const CVector& w) {
  if (v.size() != left.dim() || w.size() != right.dim()) throw DomainError("TensorElement::elementary: length mismatch");
  TensorElement z = zero(left, right, 1);
  for (int p = 0; p < left.dim(); ++p)
    for (int q = 0; q < right.dim(); ++q) z(0, 0, p, q) = v(p) * w(q);
  return z;
}

TensorElement TensorElement::identity(const Algebra& a) {
  TensorElement z = zero(Space::dual(a), Space::primal(a), 1);
  for (int p = 0; p < a.dim(); ++p) z(0, 0, p, p) = 1.0;
  return z;
}

CMatrix TensorElement::slot(int i, int j) const {
  CMatrix m(left_.dim(), right_.dim());
  for (int p = 0; p < left_.dim(); ++p)
    for (int q = 0; q < right_.dim(); ++q) m(p, q) = (*this)(i, j, p, q);
  return m;
}

int star_index(const Algebra& a, int p) {
  const auto u = a.unit_of(p);
  return a.index_of(u.block, u.col, u.row);
}

TensorElement TensorElement::adjoint() const {
  TensorElement out = zero(left_, right_, level_);
  const int dl = left_.dim();
  const int dr = right_.dim();
  std::vector<int> ls(static_cast<std::size_t>(dl));
  std::vector<int> rs(static_cast<std::size_t>(dr));
  for (int p = 0; p < dl; ++p) ls[static_cast<std::size_t>(p)] = star_index(left_.base, p);
  for (int q = 0; q < dr; ++q) rs[static_cast<std::size_t>(q)] = star_index(right_.base, q);
  for (int i = 0; i < level_; ++i)
    for (int j = 0; j < level_; ++j)
      for (int p = 0; p < dl; ++p)
        for (int q = 0; q < dr; ++q)
          out(i, j, p, q) = std::conj((*this)(j, i, ls[static_cast<std::size_t>(p)], rs[static_cast<std::size_t>(q)]));
  return out;
}

bool TensorElement::is_self_adjoint(double tolerance) const { return (*this - adjoint()).max_abs_coeff() <= tolerance; }

bool TensorElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx(0.0); });
}

double TensorElement::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TensorElement TensorElement::flip() const {
  TensorElement out = zero(right_, left_, level_);
  for (int i = 0; i < level_; ++i)
    for (int j = 0; j < level_; ++j)
      for (int p = 0; p < left_.dim(); ++p)
        for (int q = 0; q < right_.dim(); ++q) out(i, j, q, p) = (*this)(i, j, p, q);
  return out;
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
  if (o.left_ != left_ || o.right_ != right_ || o.level_ != level_) {
    throw DomainError("TensorElement: operands live in different spaces");
  }
  TensorElement out = *this;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out.coeffs_[k] += o.coeffs_[k];
  return out;
}

TensorElement TensorElement::operator-(const TensorElement& o) const { return *this + o * cplx(-1.0); }

TensorElement TensorElement::operator*(cplx s) const {
  TensorElement out = *this;
  for (auto& c : out.coeffs_) c *= s;
  return out;
}

LinMap associated_map(const TensorElement& z) {
  if (!z.left().is_dual) throw DomainError("associated_map: left factor must be a dual space");
  if (z.right().is_dual) throw DomainError("associated_map: right factor must be primal (dual targets are not supported)");
  const Algebra& a = z.left().base;
  const Algebra& b = z.right().base;
  const int n = z.level();
  const int sb = b.side();
  std::vector<CMatrix> images;
  images.reserve(static_cast<std::size_t>(a.dim()));
  for (int p = 0; p < a.dim(); ++p) {
    CMatrix slots = CMatrix::Zero(n * sb, n * sb);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CVector c(b.dim());
        for (int q = 0; q < b.dim(); ++q) c(q) = z(i, j, p, q);
        slots.block(i * sb, j * sb, sb, sb) = b.from_coords(c);
      }
    images.push_back(b.slot_to_block(slots, n));
  }
  return LinMap::from_images(a, b.amplified(n), images);
}

TensorElement tensor_of_map(const LinMap& t, const Algebra& right, int level) {
  if (t.target() != right.amplified(level)) {
    throw DomainError("tensor_of_map: target " + t.target().describe() + " is not level " + std::to_string(level) +
                      " of " + right.describe());
  }
  const Algebra& a = t.source();
  const int sb = right.side();
  TensorElement z = TensorElement::zero(Space::dual(a), Space::primal(right), level);
  for (int p = 0; p < a.dim(); ++p) {
    const CMatrix slots = right.block_to_slot(t.image(p), level);
    for (int i = 0; i < level; ++i)
      for (int j = 0; j < level; ++j) {
        const CVector c = right.coords(slots.block(i * sb, j * sb, sb, sb));
        for (int q = 0; q < right.dim(); ++q) z(i, j, p, q) = c(q);
      }
  }
  return z;
}

TensorElement tensor_compress(const CMatrix& alpha, const LevelElement& v, const LevelElement& w, const CMatrix& beta) {
  const int k = v.level();
  const int l = w.level();
  if (alpha.cols() != k * l || beta.cols() != k * l || alpha.rows() != beta.rows()) {
    throw DomainError("tensor_compress: alpha and beta must both be n x " + std::to_string(k * l));
  }
  const int n = static_cast<int>(alpha.rows());
  const int dv = v.space().dim();
  const int dw = w.space().dim();
  const CVector vc = v.coords();
  const CVector wc = w.coords();
  TensorElement z = TensorElement::zero(v.space(), w.space(), n);
  CMatrix vp(k, k);
  CMatrix wq(l, l);
  const CMatrix beta_adj = beta.adjoint();
  for (int p = 0; p < dv; ++p) {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) vp(a, b) = vc((a * k + b) * dv + p);
    if (vp.isZero(0.0)) continue;
    for (int q = 0; q < dw; ++q) {
      for (int c = 0; c < l; ++c)
        for (int d = 0; d < l; ++d) wq(c, d) = wc((c * l + d) * dw + q);
      if (wq.isZero(0.0)) continue;
      const CMatrix m = alpha * kron(vp, wq) * beta_adj;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j, p, q) = m(i, j);
    }
  }
  return z;
}

TensorElement tensor_block(const TensorElement& a, const TensorElement& b, const TensorElement& c,
                           const TensorElement& d) {
  const int n = a.level();
  for (const TensorElement* e : {&b, &c, &d}) {
    if (e->level() != n || e->left() != a.left() || e->right() != a.right()) {
      throw DomainError("tensor_block: operands live in different spaces");
    }
  }
  TensorElement out = TensorElement::zero(a.left(), a.right(), 2 * n);
  const TensorElement* parts[2][2] = {{&a, &b}, {&c, &d}};
  for (int bi = 0; bi < 2; ++bi)
    for (int bj = 0; bj < 2; ++bj)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int p = 0; p < a.left().dim(); ++p)
            for (int q = 0; q < a.right().dim(); ++q) out(bi * n + i, bj * n + j, p, q) = (*parts[bi][bj])(i, j, p, q);
  return out;
}

TensorElement tensor_diag(const TensorElement& z1, const TensorElement& z2) {
  if (z1.left() != z2.left() || z1.right() != z2.right()) throw DomainError("tensor_diag: operands live in different spaces");
  const int n1 = z1.level();
  const int n2 = z2.level();
  TensorElement out = TensorElement::zero(z1.left(), z1.right(), n1 + n2);
  for (int p = 0; p < z1.left().dim(); ++p)
    for (int q = 0; q < z1.right().dim(); ++q) {
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) out(i, j, p, q) = z1(i, j, p, q);
      for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) out(n1 + i, n1 + j, p, q) = z2(i, j, p, q);
    }
  return out;
}

TensorElement apply_left(const LinMap& phi, const TensorElement& z) {
  if (z.left().is_dual) throw DomainError("apply_left: left factor must be primal");
  if (phi.source() != z.left().base) throw DomainError("apply_left: map source does not match the left factor");
  const CMatrix k = phi.coefficients();
  const int n = z.level();
  TensorElement out = TensorElement::zero(Space::primal(phi.target()), z.right(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const CMatrix s = k.transpose() * z.slot(i, j);
      for (int p = 0; p < s.rows(); ++p)
        for (int q = 0; q < s.cols(); ++q) out(i, j, p, q) = s(p, q);
    }
  return out;
}

}  // namespace decnorm
