#include "decnorm/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "decnorm/choi.hpp"
#include "decnorm/errors.hpp"
#include "decnorm/norms.hpp"

namespace decnorm {

Algebra::Algebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  for (int n : blocks_) {
    if (n <= 0) throw DomainError("Algebra: block sizes must be positive");
    offsets_.push_back(side_);
    basis_offsets_.push_back(dim_);
    side_ += n;
    dim_ += n * n;
  }
}

Algebra::Unit Algebra::unit_of(int p) const {
  if (p < 0 || p >= dim_) throw DomainError("Algebra: basis index out of range");
  int b = 0;
  while (b + 1 < num_blocks() && basis_offsets_[static_cast<std::size_t>(b + 1)] <= p) ++b;
  const int local = p - basis_offsets_[static_cast<std::size_t>(b)];
  const int n = blocks_[static_cast<std::size_t>(b)];
  return {b, local / n, local % n};
}

int Algebra::index_of(int b, int row, int col) const {
  const int n = block_size(b);
  if (row < 0 || row >= n || col < 0 || col >= n) throw DomainError("Algebra: unit index out of range");
  return basis_offset(b) + row * n + col;
}

CMatrix Algebra::unit(int p) const {
  const Unit u = unit_of(p);
  CMatrix m = zero();
  m(block_offset(u.block) + u.row, block_offset(u.block) + u.col) = 1.0;
  return m;
}

CMatrix Algebra::block(const CMatrix& a, int b) const {
  const int o = block_offset(b);
  const int n = block_size(b);
  return a.block(o, o, n, n);
}

CVector Algebra::coords(const CMatrix& a) const {
  if (a.rows() != side_ || a.cols() != side_) {
    throw DomainError("Algebra::coords: expected a " + std::to_string(side_) + "x" + std::to_string(side_) +
                      " matrix");
  }
  CVector c(dim_);
  for (int b = 0; b < num_blocks(); ++b) {
    const int o = block_offset(b);
    const int n = block_size(b);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(basis_offset(b) + i * n + j) = a(o + i, o + j);
  }
  return c;
}

CMatrix Algebra::from_coords(const CVector& c) const {
  if (c.size() != dim_) throw DomainError("Algebra::from_coords: coordinate length mismatch");
  CMatrix a = zero();
  for (int b = 0; b < num_blocks(); ++b) {
    const int o = block_offset(b);
    const int n = block_size(b);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(o + i, o + j) = c(basis_offset(b) + i * n + j);
  }
  return a;
}

bool Algebra::respects_support(const CMatrix& a) const {
  if (a.rows() != side_ || a.cols() != side_) return false;
  return (a - project(a)).cwiseAbs().maxCoeff() == 0.0;
}

CMatrix Algebra::project(const CMatrix& a) const {
  CMatrix out = zero();
  for (int b = 0; b < num_blocks(); ++b) {
    const int o = block_offset(b);
    const int n = block_size(b);
    out.block(o, o, n, n) = a.block(o, o, n, n);
  }
  return out;
}

Algebra Algebra::amplified(int n) const {
  if (n < 1) throw DomainError("Algebra::amplified: level must be >= 1");
  std::vector<int> b;
  b.reserve(blocks_.size());
  for (int s : blocks_) b.push_back(n * s);
  return Algebra(std::move(b));
}

std::vector<int> Algebra::slot_to_block_permutation(int n) const {
  std::vector<int> perm(static_cast<std::size_t>(n * side_));
  for (int b = 0; b < num_blocks(); ++b) {
    const int o = block_offset(b);
    const int nb = block_size(b);
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < nb; ++r) perm[static_cast<std::size_t>(i * side_ + o + r)] = n * o + i * nb + r;
  }
  return perm;
}

CMatrix Algebra::slot_to_block(const CMatrix& m, int n) const {
  const auto perm = slot_to_block_permutation(n);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = m(i, j);
  return out;
}

CMatrix Algebra::block_to_slot(const CMatrix& m, int n) const {
  const auto perm = slot_to_block_permutation(n);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(i, j) = m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  return out;
}

std::string Algebra::describe() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i];
  os << "]";
  return os.str();
}

std::string Space::describe() const { return (is_dual ? "dual" : "primal") + base.describe(); }

CMatrix density_of_coords(const Algebra& a, const CVector& c) { return a.from_coords(c).transpose(); }

CVector coords_of_density(const Algebra& a, const CMatrix& density) {
  return a.coords(density.transpose());
}

// ---------------------------------------------------------------------------

LevelElement::LevelElement() : LevelElement(Space::primal(Algebra::full(1)), 1, CMatrix::Zero(1, 1)) {}

LevelElement::LevelElement(Space space, int level, CMatrix matrix)
    : space_(std::move(space)), level_(level), matrix_(std::move(matrix)) {
  if (level_ < 1) throw DomainError("LevelElement: level must be >= 1");
  const int side = space_.base.side();
  if (matrix_.rows() != level_ * side || matrix_.cols() != level_ * side) {
    throw DomainError("LevelElement: expected a " + std::to_string(level_ * side) + "x" +
                      std::to_string(level_ * side) + " matrix for level " + std::to_string(level_) +
                      " over " + space_.describe());
  }
  for (int i = 0; i < level_; ++i)
    for (int j = 0; j < level_; ++j) {
      if (!space_.base.respects_support(matrix_.block(i * side, j * side, side, side))) {
        throw DomainError("LevelElement: slot (" + std::to_string(i) + "," + std::to_string(j) +
                          ") violates the block-diagonal support of " + space_.base.describe());
      }
    }
}

LevelElement LevelElement::zero(const Space& space, int level) {
  const int s = level * space.base.side();
  return {space, level, CMatrix::Zero(s, s)};
}

LevelElement LevelElement::unit(const Space& space, int level) {
  const int s = level * space.base.side();
  return {space, level, CMatrix::Identity(s, s)};
}

LevelElement LevelElement::from_coords(const Space& space, int level, const CVector& coords) {
  const Algebra& a = space.base;
  const int d = a.dim();
  if (coords.size() != level * level * d) throw DomainError("LevelElement::from_coords: length mismatch");
  const int side = a.side();
  CMatrix m = CMatrix::Zero(level * side, level * side);
  for (int i = 0; i < level; ++i)
    for (int j = 0; j < level; ++j) {
      const CVector c = coords.segment((i * level + j) * d, d);
      m.block(i * side, j * side, side, side) = space.is_dual ? density_of_coords(a, c) : a.from_coords(c);
    }
  return {space, level, m};
}

CVector LevelElement::slot_coords(int i, int j) const {
  const int side = space_.base.side();
  const CMatrix slot = matrix_.block(i * side, j * side, side, side);
  return space_.is_dual ? coords_of_density(space_.base, slot) : space_.base.coords(slot);
}

CVector LevelElement::coords() const {
  const int d = space_.base.dim();
  CVector c(level_ * level_ * d);
  for (int i = 0; i < level_; ++i)
    for (int j = 0; j < level_; ++j) c.segment((i * level_ + j) * d, d) = slot_coords(i, j);
  return c;
}

LevelElement LevelElement::adjoint() const { return {space_, level_, matrix_.adjoint()}; }

bool LevelElement::is_self_adjoint(double tolerance) const {
  return max_abs(matrix_ - matrix_.adjoint()) <= tolerance;
}

LevelElement LevelElement::operator+(const LevelElement& o) const {
  if (o.space_ != space_ || o.level_ != level_) throw DomainError("LevelElement: operand mismatch");
  return {space_, level_, matrix_ + o.matrix_};
}

LevelElement LevelElement::operator-(const LevelElement& o) const { return *this + o * cplx(-1.0); }

LevelElement LevelElement::operator*(cplx s) const { return {space_, level_, matrix_ * s}; }

LinMap LevelElement::as_map() const {
  if (!space_.is_dual) throw DomainError("LevelElement::as_map: element is not on the dual side");
  const Algebra& a = space_.base;
  std::vector<CVector> slots(static_cast<std::size_t>(level_ * level_));
  for (int i = 0; i < level_; ++i)
    for (int j = 0; j < level_; ++j) slots[static_cast<std::size_t>(i * level_ + j)] = slot_coords(i, j);
  std::vector<CMatrix> images;
  images.reserve(static_cast<std::size_t>(a.dim()));
  for (int p = 0; p < a.dim(); ++p) {
    CMatrix img(level_, level_);
    for (int i = 0; i < level_; ++i)
      for (int j = 0; j < level_; ++j) img(i, j) = slots[static_cast<std::size_t>(i * level_ + j)](p);
    images.push_back(img);
  }
  return LinMap::from_images(a, Algebra::full(level_), images);
}

LevelElement LevelElement::from_map(const LinMap& map) {
  if (map.target().num_blocks() != 1) {
    throw DomainError("LevelElement::from_map: target must be a single matrix block M_n");
  }
  const Algebra& a = map.source();
  const int n = map.target().side();
  CVector c(n * n * a.dim());
  for (int p = 0; p < a.dim(); ++p) {
    const CMatrix img = map.image(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c((i * n + j) * a.dim() + p) = img(i, j);
  }
  return from_coords(Space::dual(a), n, c);
}

// ---------------------------------------------------------------------------

double level_norm(const LevelElement& x) {
  if (x.space().is_dual) return cb_norm(x.as_map());
  return op_norm(x.matrix());
}

bool level_positive(const LevelElement& x, double tolerance) {
  if (!x.is_self_adjoint(std::max(tolerance, tol::kStructural) * std::max(1.0, max_abs(x.matrix())))) {
    throw DomainError("level_positive: element is not self-adjoint");
  }
  if (x.space().is_dual) return is_cp(x.as_map(), tolerance);
  return psd_check(HermitianMatrix(x.matrix()), tolerance).is_psd;
}

LevelElement compress(const LevelElement& x, const CMatrix& alpha) {
  if (alpha.rows() != x.level()) {
    throw DomainError("compress: alpha must have " + std::to_string(x.level()) + " rows, got " +
                      std::to_string(alpha.rows()));
  }
  const int side = x.space().base.side();
  const CMatrix big = kron(alpha, CMatrix::Identity(side, side));
  return {x.space(), static_cast<int>(alpha.cols()), big.adjoint() * x.matrix() * big};
}

LevelElement block_matrix(const LevelElement& a, const LevelElement& b, const LevelElement& c,
                          const LevelElement& d) {
  const int n = a.level();
  for (const LevelElement* e : {&b, &c, &d}) {
    if (e->level() != n || e->space() != a.space()) throw DomainError("block_matrix: operand mismatch");
  }
  const int s = n * a.space().base.side();
  CMatrix m(2 * s, 2 * s);
  m << a.matrix(), b.matrix(), c.matrix(), d.matrix();
  return {a.space(), 2 * n, m};
}

namespace {

RegularityWitness primal_witness(const LevelElement& x) {
  const double norm = op_norm(x.matrix());
  if (!(norm < 1.0)) throw DomainError("regularity_witness: requires level_norm(x) < 1");
  const Algebra& alg = x.space().base;
  const int n = x.level();
  const Algebra amp = alg.amplified(n);
  const CMatrix xb = alg.slot_to_block(x.matrix(), n);
  const double eps = (1.0 - norm) / 2.0;
  CMatrix left = CMatrix::Zero(xb.rows(), xb.cols());
  CMatrix right = left;
  for (int b = 0; b < amp.num_blocks(); ++b) {
    const CMatrix blk = amp.block(xb, b);
    const CMatrix l = psd_sqrt(hermitian_part(blk * blk.adjoint()));
    const CMatrix r = psd_sqrt(hermitian_part(blk.adjoint() * blk));
    const int o = amp.block_offset(b);
    const int s = amp.block_size(b);
    left.block(o, o, s, s) = l + eps * CMatrix::Identity(s, s);
    right.block(o, o, s, s) = r + eps * CMatrix::Identity(s, s);
  }
  LevelElement a(x.space(), n, alg.block_to_slot(left, n));
  LevelElement d(x.space(), n, alg.block_to_slot(right, n));
  return {a, d, block_matrix(a, x, x.adjoint(), d)};
}

RegularityWitness dual_witness(const LevelElement& x) {
  const LinMap phi = x.as_map();
  const DecResult dec = dec_norm(phi);
  const double v = dec.witness.value;
  if (!(v < 1.0)) throw DomainError("regularity_witness: requires level_norm(x) < 1");
  const double eps = (1.0 - v) / 2.0;
  // eps * (a -> tr(a)/side * I) has Choi (eps/side) * I and unit image eps * I.
  const double shift = eps / x.space().base.side();
  auto lift = [&](const LinMap& s) {
    std::vector<CMatrix> blocks = s.choi_blocks();
    for (auto& c : blocks) c += shift * CMatrix::Identity(c.rows(), c.cols());
    return LinMap(s.source(), s.target(), blocks);
  };
  LevelElement a = LevelElement::from_map(lift(dec.witness.s1));
  LevelElement d = LevelElement::from_map(lift(dec.witness.s2));
  return {a, d, block_matrix(a, x, x.adjoint(), d)};
}

}  // namespace

RegularityWitness regularity_witness(const LevelElement& x) {
  return x.space().is_dual ? dual_witness(x) : primal_witness(x);
}

}  // namespace decnorm
