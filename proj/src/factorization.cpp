#include <algorithm>
#include <cmath>

#include "decnorm/errors.hpp"
#include "decnorm/norms.hpp"

namespace decnorm {

namespace {

TensorElement dual_left(const TensorElement& z) {
  if (z.left().is_dual && !z.right().is_dual) return z;
  if (!z.left().is_dual && z.right().is_dual) return z.flip();
  throw DomainError("expected one primal and one dual factor, got " + z.left().describe() + " (x) " +
                    z.right().describe());
}

// w = [S(e_ij)] in M_k(M_n(B)) in slot ordering, S: M_k -> B.amplified(n).
LevelElement choi_element(const LinMap& s, const Algebra& b, int n) {
  const int k = s.source().side();
  const int blk = n * b.side();
  CMatrix w = CMatrix::Zero(k * blk, k * blk);
  const Algebra& mk = s.source();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) w.block(i * blk, j * blk, blk, blk) = b.block_to_slot(s.image(mk.index_of(0, i, j)), n);
  return {Space::primal(b), k * n, w};
}

// alpha = vec(I_k)^T (x) I_n, so alpha (x (x) w) alpha* = sum_ij x_ij w_ij.
CMatrix trace_alpha(int k, int n) {
  const int l = k * n;
  CMatrix alpha = CMatrix::Zero(n, k * l);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < n; ++a) alpha(a, i * l + i * n + a) = 1.0;
  return alpha;
}

FactorizationWitness make_witness(const LinMap& r, const LinMap& s, const Algebra& b, int n) {
  const int k = r.target().side();
  FactorizationWitness f{r, choi_element(s, b, n), trace_alpha(k, n), k, k * n};
  return f;
}

std::optional<FactorizationWitness> rank_one_route(const LinMap& psi, const Algebra& b, int n, double tolerance) {
  const CMatrix coef = psi.coefficients();
  Eigen::JacobiSVD<CMatrix> svd(coef, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Algebra& a = psi.source();
  if (sv.size() == 0 || sv(0) == 0.0) {
    return make_witness(LinMap::zero(a, Algebra::full(1)), LinMap::zero(Algebra::full(1), psi.target()), b, n);
  }
  if (sv.size() > 1 && sv(1) > tolerance * std::max(1.0, sv(0))) return std::nullopt;
  // Psi(e_p) = sigma u_p B with B = element of conj(v); rotate the phase so B >= 0.
  CMatrix bm = psi.target().from_coords(svd.matrixV().col(0).conjugate());
  const cplx tr = bm.trace();
  if (std::abs(tr) <= tolerance) return std::nullopt;
  const cplx phase = tr / std::abs(tr);
  bm /= phase;
  const double bn = op_norm(bm);
  bm /= bn;
  CMatrix rk(a.dim(), 1);
  for (int p = 0; p < a.dim(); ++p) rk(p, 0) = sv(0) * svd.matrixU()(p, 0) * phase * bn;
  const LinMap r = LinMap::from_coefficients(a, Algebra::full(1), rk);
  const LinMap s = LinMap::from_function(Algebra::full(1), psi.target(), [&](const CMatrix& x) { return CMatrix(x(0, 0) * bm); });
  if (!is_cp(r, tolerance) || !is_cp(s, tolerance)) return std::nullopt;
  return make_witness(r, s, b, n);
}

// R(a) = V* a V with V spanning the ranges of the Kraus operators of Psi,
// S(x) = Psi(E(V x V*)) with E the block pinching onto the source algebra.
std::optional<FactorizationWitness> compression_route(const LinMap& psi, const Algebra& b, int n, int k_max,
                                                      double tolerance) {
  const Algebra& a = psi.source();
  const Algebra& tgt = psi.target();
  std::vector<CMatrix> bases;
  int k = 0;
  for (int bb = 0; bb < a.num_blocks(); ++bb) {
    const int nb = a.block_size(bb);
    std::vector<CVector> cols;
    double top = 0.0;
    for (int c = 0; c < tgt.num_blocks(); ++c) top = std::max(top, max_abs(psi.choi(bb, c)));
    for (int c = 0; c < tgt.num_blocks(); ++c) {
      const int m = tgt.block_size(c);
      const auto e = eig_hermitian(HermitianMatrix(psi.choi(bb, c)));
      for (Eigen::Index t = 0; t < e.values.size(); ++t) {
        if (e.values(t) <= tolerance * std::max(1.0, top)) continue;
        for (int r = 0; r < m; ++r) {
          CVector col(nb);
          for (int x = 0; x < nb; ++x) col(x) = std::conj(e.vectors(x * m + r, t)) * std::sqrt(e.values(t));
          cols.push_back(col);
        }
      }
    }
    CMatrix basis(nb, 0);
    if (!cols.empty()) {
      CMatrix stack(nb, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t i = 0; i < cols.size(); ++i) stack.col(static_cast<Eigen::Index>(i)) = cols[i];
      Eigen::JacobiSVD<CMatrix> svd(stack, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      Eigen::Index rank = 0;
      while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
      basis = svd.matrixU().leftCols(rank);
    }
    k += static_cast<int>(basis.cols());
    bases.push_back(basis);
  }
  if (k == 0 || k > k_max) return std::nullopt;
  CMatrix v = CMatrix::Zero(a.side(), k);
  int col = 0;
  for (int bb = 0; bb < a.num_blocks(); ++bb) {
    const CMatrix& bs = bases[static_cast<std::size_t>(bb)];
    v.block(a.block_offset(bb), col, bs.rows(), bs.cols()) = bs;
    col += static_cast<int>(bs.cols());
  }
  const Algebra mk = Algebra::full(k);
  const LinMap r = LinMap::from_function(a, mk, [&](const CMatrix& x) { return CMatrix(v.adjoint() * x * v); });
  const LinMap s = LinMap::from_function(mk, tgt, [&](const CMatrix& x) { return psi.apply(a.project(v * x * v.adjoint())); });
  return make_witness(r, s, b, n);
}

}  // namespace

bool cone_member_delta(const TensorElement& z, double tolerance) {
  return is_cp(associated_map(dual_left(z)), tolerance);
}

LinMap factorization_map(const FactorizationWitness& f) {
  const Algebra& b = f.w.space().base;
  const int n = static_cast<int>(f.alpha.rows());
  const int side = b.side();
  const CMatrix big_alpha = kron(f.alpha, CMatrix::Identity(side, side));
  return LinMap::from_function(f.r.source(), b.amplified(n), [&](const CMatrix& a) {
    const CMatrix x = f.r.apply(a);
    const CMatrix s = big_alpha * kron(x, f.w.matrix()) * big_alpha.adjoint();
    return b.slot_to_block(s, n);
  });
}

DeltaConeResult cone_member_Delta(const TensorElement& z_in, double tolerance, int k_max) {
  const TensorElement z = dual_left(z_in);
  const LinMap psi = associated_map(z);
  if (k_max <= 0) k_max = psi.source().dim() * psi.target().dim();
  DeltaConeResult out;
  if (!is_cp(psi, tolerance)) return out;
  const Algebra& b = z.right().base;
  const int n = z.level();
  double scale = 0.0;
  for (const auto& c : psi.choi_blocks()) scale = std::max(scale, max_abs(c));
  auto accept = [&](const std::optional<FactorizationWitness>& w) {
    if (!w) return false;
    if (map_distance(factorization_map(*w), psi) > tolerance * std::max(1.0, scale)) return false;
    if (!is_cp(w->r, tolerance) || !level_positive(w->w, tolerance)) return false;
    out.member = true;
    out.witness = w;
    return true;
  };
  if (accept(rank_one_route(psi, b, n, tolerance))) return out;
  if (k_max >= 2 && accept(compression_route(psi, b, n, k_max, tolerance))) return out;
  out.k_max_limited = true;
  return out;
}

namespace {

// Level-r element diag(c_0, ..., c_{r-1}) with c_k given by coordinates.
LevelElement diagonal_element(const Space& s, const std::vector<CVector>& entries) {
  const int r = static_cast<int>(entries.size());
  const int d = s.dim();
  CVector coords = CVector::Zero(r * r * d);
  for (int k = 0; k < r; ++k) coords.segment((k * r + k) * d, d) = entries[static_cast<std::size_t>(k)];
  return LevelElement::from_coords(s, r, coords);
}

// Upper bound for the norm of a level element: exact op norm on the primal
// side, sum of slot functional norms on the dual side.
double norm_bound(const LevelElement& x) {
  if (!x.space().is_dual) return op_norm(x.matrix());
  double total = 0.0;
  double diag_max = 0.0;
  bool diagonal = true;
  for (int i = 0; i < x.level(); ++i)
    for (int j = 0; j < x.level(); ++j) {
      const CVector c = x.slot_coords(i, j);
      const double v = trace_norm(density_of_coords(x.space().base, c));
      total += v;
      if (i == j) diag_max = std::max(diag_max, v);
      else if (v != 0.0) diagonal = false;
    }
  return diagonal ? diag_max : total;
}

}  // namespace

NonemptyWitness nonempty_witness(const TensorElement& z) {
  const Space& vs = z.left();
  const Space& ws = z.right();
  const int n = z.level();
  const int dv = vs.dim();
  const int dw = ws.dim();

  // z = sum_k v_k (x) omega_k with v_k in V and omega_k in M_n(W), from an SVD
  // of the coefficients arranged as p x (i, j, q).
  CMatrix flat(dv, n * n * dw);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < dv; ++p)
        for (int q = 0; q < dw; ++q) flat(p, (i * n + j) * dw + q) = z(i, j, p, q);
  Eigen::JacobiSVD<CMatrix> svd(flat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > 1e-13 * std::max(1e-300, sv(0))) ++r;

  NonemptyWitness out;
  if (r == 0) {
    out.u1 = out.u2 = TensorElement::zero(vs, ws, n);
    out.block = TensorElement::zero(vs, ws, 2 * n);
    out.v_block = LevelElement::zero(vs, 2);
    out.w_block = LevelElement::zero(ws, 2);
    out.gamma = CMatrix::Zero(2 * n, 4);
    return out;
  }

  std::vector<CVector> vk;
  std::vector<CVector> wk_coords;  // level-n coordinates of omega_k
  for (int k = 0; k < r; ++k) {
    vk.push_back(svd.matrixU().col(k) * std::sqrt(sv(k)));
    CVector om(n * n * dw);
    for (int t = 0; t < n * n * dw; ++t) om(t) = std::conj(svd.matrixV()(t, k)) * std::sqrt(sv(k));
    wk_coords.push_back(om);
  }
  const LevelElement v = diagonal_element(vs, vk);
  // w = diag(omega_0, ..., omega_{r-1}) at level r n.
  const int l = r * n;
  CVector wc = CVector::Zero(l * l * dw);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        wc.segment(((k * n + i) * l + (k * n + j)) * dw, dw) = wk_coords[static_cast<std::size_t>(k)].segment((i * n + j) * dw, dw);
  const LevelElement w = LevelElement::from_coords(ws, l, wc);

  const double nv = norm_bound(v);
  const double nw = norm_bound(w);
  const LevelElement vh = v * cplx(0.5 / nv);
  const LevelElement wh = w * cplx(0.5 / nw);
  const double c = 4.0 * nv * nw;

  // alpha_{i,(k,(k',j'))} = delta_kk' delta_ij'.
  CMatrix alpha = CMatrix::Zero(n, r * l);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < n; ++i) alpha(i, k * l + k * n + i) = std::sqrt(c);
  const CMatrix& beta = alpha;

  const RegularityWitness rv = regularity_witness(vh);
  const RegularityWitness rw = regularity_witness(wh);
  out.u1 = tensor_compress(alpha, rv.a, rw.a, alpha);
  out.u2 = tensor_compress(beta, rv.d, rw.d, beta);
  out.v_block = rv.block;
  out.w_block = rw.block;

  // gamma = [[alpha, 0, 0, 0], [0, 0, 0, beta]] against (2r) x (2l) indices.
  out.gamma = CMatrix::Zero(2 * n, 4 * r * l);
  for (int k = 0; k < r; ++k)
    for (int t = 0; t < l; ++t)
      for (int i = 0; i < n; ++i) {
        out.gamma(i, k * (2 * l) + t) = alpha(i, k * l + t);
        out.gamma(n + i, (r + k) * (2 * l) + l + t) = beta(i, k * l + t);
      }
  out.block = tensor_compress(out.gamma, out.v_block, out.w_block, out.gamma);
  return out;
}

}  // namespace decnorm
