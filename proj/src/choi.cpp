#include "decnorm/choi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decnorm/errors.hpp"

namespace decnorm {

namespace {

void require_same_spaces(const LinMap& a, const LinMap& b, const char* what) {
  if (a.source() != b.source() || a.target() != b.target()) {
    throw DomainError(std::string(what) + ": maps act between different algebras (" + a.source().describe() +
                      "->" + a.target().describe() + " vs " + b.source().describe() + "->" +
                      b.target().describe() + ")");
  }
}

}  // namespace

LinMap::LinMap(Algebra source, Algebra target, std::vector<CMatrix> choi)
    : source_(std::move(source)), target_(std::move(target)), choi_(std::move(choi)) {
  const int nb = source_.num_blocks();
  const int nc = target_.num_blocks();
  if (static_cast<int>(choi_.size()) != nb * nc) {
    throw DomainError("LinMap: expected " + std::to_string(nb * nc) + " Choi blocks, got " +
                      std::to_string(choi_.size()));
  }
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nc; ++c) {
      const CMatrix& m = choi_[static_cast<std::size_t>(b * nc + c)];
      const int s = source_.block_size(b) * target_.block_size(c);
      if (m.rows() != s || m.cols() != s) {
        throw DomainError("LinMap: Choi block (" + std::to_string(b) + "," + std::to_string(c) + ") must be " +
                          std::to_string(s) + "x" + std::to_string(s));
      }
    }
}

LinMap LinMap::from_images(const Algebra& source, const Algebra& target, const std::vector<CMatrix>& images) {
  if (static_cast<int>(images.size()) != source.dim()) {
    throw DomainError("LinMap::from_images: expected one image per basis element");
  }
  const int nc = target.num_blocks();
  std::vector<CMatrix> choi;
  for (int b = 0; b < source.num_blocks(); ++b) {
    const int n = source.block_size(b);
    for (int c = 0; c < nc; ++c) {
      const int m = target.block_size(c);
      choi.push_back(CMatrix::Zero(n * m, n * m));
    }
  }
  for (int p = 0; p < source.dim(); ++p) {
    const CMatrix& img = images[static_cast<std::size_t>(p)];
    if (img.rows() != target.side() || img.cols() != target.side()) {
      throw DomainError("LinMap::from_images: image has wrong size for target " + target.describe());
    }
    const auto u = source.unit_of(p);
    for (int c = 0; c < nc; ++c) {
      const int m = target.block_size(c);
      choi[static_cast<std::size_t>(u.block * nc + c)].block(u.row * m, u.col * m, m, m) = target.block(img, c);
    }
  }
  return {source, target, std::move(choi)};
}

LinMap LinMap::from_function(const Algebra& source, const Algebra& target,
                             const std::function<CMatrix(const CMatrix&)>& f) {
  std::vector<CMatrix> images;
  images.reserve(static_cast<std::size_t>(source.dim()));
  for (int p = 0; p < source.dim(); ++p) images.push_back(f(source.unit(p)));
  return from_images(source, target, images);
}

LinMap LinMap::from_coefficients(const Algebra& source, const Algebra& target, const CMatrix& k) {
  if (k.rows() != source.dim() || k.cols() != target.dim()) {
    throw DomainError("LinMap::from_coefficients: coefficient matrix must be dim(source) x dim(target)");
  }
  std::vector<CMatrix> images;
  for (int p = 0; p < source.dim(); ++p) images.push_back(target.from_coords(k.row(p).transpose()));
  return from_images(source, target, images);
}

LinMap LinMap::identity(const Algebra& a) {
  return from_function(a, a, [](const CMatrix& x) { return x; });
}

LinMap LinMap::zero(const Algebra& source, const Algebra& target) {
  return from_function(source, target, [&](const CMatrix&) { return target.zero(); });
}

LinMap LinMap::transpose(const Algebra& a) {
  return from_function(a, a, [](const CMatrix& x) { return CMatrix(x.transpose()); });
}

const CMatrix& LinMap::choi(int b, int c) const {
  if (b < 0 || b >= source_.num_blocks() || c < 0 || c >= target_.num_blocks()) {
    throw DomainError("LinMap::choi: block index out of range");
  }
  return choi_[static_cast<std::size_t>(b * target_.num_blocks() + c)];
}

CMatrix LinMap::apply(const CMatrix& a) const {
  if (a.rows() != source_.side() || a.cols() != source_.side()) {
    throw DomainError("LinMap::apply: argument must be " + std::to_string(source_.side()) + "x" +
                      std::to_string(source_.side()));
  }
  if (!source_.respects_support(a)) {
    throw DomainError("LinMap::apply: argument has entries outside the blocks of " + source_.describe());
  }
  CMatrix out = target_.zero();
  for (int b = 0; b < source_.num_blocks(); ++b) {
    const int n = source_.block_size(b);
    const CMatrix ab = source_.block(a, b);
    for (int c = 0; c < target_.num_blocks(); ++c) {
      const int m = target_.block_size(c);
      const int o = target_.block_offset(c);
      const CMatrix& ch = choi(b, c);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (ab(x, y) == cplx(0.0)) continue;
          out.block(o, o, m, m) += ab(x, y) * ch.block(x * m, y * m, m, m);
        }
    }
  }
  return out;
}

CMatrix LinMap::image(int p) const {
  const auto u = source_.unit_of(p);
  CMatrix out = target_.zero();
  for (int c = 0; c < target_.num_blocks(); ++c) {
    const int m = target_.block_size(c);
    const int o = target_.block_offset(c);
    out.block(o, o, m, m) = choi(u.block, c).block(u.row * m, u.col * m, m, m);
  }
  return out;
}

CMatrix LinMap::coefficients() const {
  CMatrix k(source_.dim(), target_.dim());
  for (int p = 0; p < source_.dim(); ++p) k.row(p) = target_.coords(image(p)).transpose();
  return k;
}

LinMap LinMap::operator+(const LinMap& o) const {
  require_same_spaces(*this, o, "LinMap::operator+");
  std::vector<CMatrix> c = choi_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.choi_[i];
  return {source_, target_, std::move(c)};
}

LinMap LinMap::operator-(const LinMap& o) const { return *this + o * cplx(-1.0); }

LinMap LinMap::operator*(cplx s) const {
  std::vector<CMatrix> c = choi_;
  for (auto& m : c) m *= s;
  return {source_, target_, std::move(c)};
}

LinMap adjoint_map(const LinMap& t) {
  std::vector<CMatrix> c;
  c.reserve(t.choi_blocks().size());
  for (const auto& m : t.choi_blocks()) c.push_back(m.adjoint());
  return {t.source(), t.target(), std::move(c)};
}

LinMap amplify(const LinMap& t, int n) {
  if (n < 1) throw DomainError("amplify: level must be >= 1");
  if (n == 1) return t;
  const Algebra& a = t.source();
  const Algebra& b = t.target();
  const int sa = a.side();
  const int sb = b.side();
  return LinMap::from_function(a.amplified(n), b.amplified(n), [&](const CMatrix& x) {
    const CMatrix slots = a.block_to_slot(x, n);
    CMatrix out = CMatrix::Zero(n * sb, n * sb);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const CMatrix s = slots.block(i * sa, j * sa, sa, sa);
        if (s.isZero(0.0)) continue;
        out.block(i * sb, j * sb, sb, sb) = t.apply(s);
      }
    return b.slot_to_block(out, n);
  });
}

LinMap compose(const LinMap& s, const LinMap& t) {
  if (t.target() != s.source()) {
    throw DomainError("compose: target " + t.target().describe() + " does not match source " +
                      s.source().describe());
  }
  return LinMap::from_function(t.source(), s.target(), [&](const CMatrix& x) { return s.apply(t.apply(x)); });
}

double choi_min_eig(const LinMap& t) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : t.choi_blocks()) {
    if (c.rows() == 0) continue;
    m = std::min(m, eig_hermitian(HermitianMatrix(c)).values.minCoeff());
  }
  return std::isfinite(m) ? m : 0.0;
}

bool is_cp(const LinMap& t, double tolerance) {
  for (const auto& c : t.choi_blocks()) {
    const double scale = std::max(1.0, max_abs(c));
    if (max_abs(c - c.adjoint()) > tolerance * scale) return false;
    if (!psd_check(HermitianMatrix(c), tolerance * scale).is_psd) return false;
  }
  return true;
}

double unit_image_norm(const LinMap& t) { return op_norm(t.apply(t.source().identity())); }

bool is_ccp(const LinMap& t, double tolerance) {
  return is_cp(t, tolerance) && unit_image_norm(t) <= 1.0 + tolerance;
}

CMatrix canonical_shuffle(const CMatrix& m, const std::vector<int>& dims, const std::vector<int>& perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) throw DomainError("canonical_shuffle: perm and dims differ in length");
  std::vector<bool> seen(k, false);
  long total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (perm[i] < 0 || perm[i] >= static_cast<int>(k) || seen[static_cast<std::size_t>(perm[i])]) {
      throw DomainError("canonical_shuffle: perm is not a permutation");
    }
    seen[static_cast<std::size_t>(perm[i])] = true;
    total *= dims[i];
  }
  if (m.rows() != total || m.cols() != total) throw DomainError("canonical_shuffle: matrix size mismatch");

  // Input strides are row-major over dims; output factor j has dimension dims[perm[j]].
  std::vector<long> in_stride(k, 1);
  for (std::size_t i = k; i-- > 1;) in_stride[i - 1] = in_stride[i] * dims[i];
  std::vector<int> map(static_cast<std::size_t>(total));
  std::vector<int> digit(k, 0);
  for (long out = 0; out < total; ++out) {
    long in = 0;
    for (std::size_t j = 0; j < k; ++j) in += digit[j] * in_stride[static_cast<std::size_t>(perm[j])];
    map[static_cast<std::size_t>(out)] = static_cast<int>(in);
    for (std::size_t j = k; j-- > 0;) {
      if (++digit[j] < dims[static_cast<std::size_t>(perm[j])]) break;
      digit[j] = 0;
    }
  }
  CMatrix r(total, total);
  for (long i = 0; i < total; ++i)
    for (long j = 0; j < total; ++j) r(i, j) = m(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  return r;
}

LinMap block2x2(const LinMap& s1, const LinMap& t, const LinMap& s2) {
  require_same_spaces(s1, t, "block2x2");
  require_same_spaces(s2, t, "block2x2");
  const Algebra& b = t.target();
  const int sb = b.side();
  return LinMap::from_function(t.source(), b.amplified(2), [&](const CMatrix& v) {
    CMatrix out(2 * sb, 2 * sb);
    out << s1.apply(v), t.apply(v), CMatrix(t.apply(v.adjoint()).adjoint()), s2.apply(v);
    return b.slot_to_block(out, 2);
  });
}

CMatrix block2x2_arranged_choi(const LinMap& s1, const LinMap& t, const LinMap& s2, int b, int c) {
  require_same_spaces(s1, t, "block2x2_arranged_choi");
  require_same_spaces(s2, t, "block2x2_arranged_choi");
  const CMatrix& ct = t.choi(b, c);
  const Eigen::Index s = ct.rows();
  CMatrix out(2 * s, 2 * s);
  out << s1.choi(b, c), ct, ct.adjoint(), s2.choi(b, c);
  return out;
}

double map_distance(const LinMap& a, const LinMap& b) {
  require_same_spaces(a, b, "map_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.choi_blocks().size(); ++i)
    d = std::max(d, max_abs(a.choi_blocks()[i] - b.choi_blocks()[i]));
  return d;
}

}  // namespace decnorm
