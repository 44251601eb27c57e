#include <algorithm>
#include <cmath>

#include "dec_sdp.hpp"
#include "decnorm/errors.hpp"
#include "decnorm/norms.hpp"
#include "decnorm/random.hpp"

namespace decnorm {

namespace {

TensorElement dual_left(const TensorElement& z) {
  if (z.left().is_dual && !z.right().is_dual) return z;
  if (!z.left().is_dual && z.right().is_dual) return z.flip();
  throw DomainError("expected one primal and one dual factor, got " + z.left().describe() + " (x) " +
                    z.right().describe());
}

TensorElement primal_left(const TensorElement& z) {
  if (!z.left().is_dual && z.right().is_dual) return z;
  if (z.left().is_dual && !z.right().is_dual) return z.flip();
  throw DomainError("expected one primal and one dual factor, got " + z.left().describe() + " (x) " +
                    z.right().describe());
}

// Norm of a functional given by dual coordinates: trace norm of its density.
double functional_norm(const Algebra& a, const CVector& coords) { return trace_norm(density_of_coords(a, coords)); }

double element_norm(const Space& s, const CVector& coords) {
  return s.is_dual ? functional_norm(s.base, coords) : op_norm(s.base.from_coords(coords));
}

}  // namespace

double inj_norm(const TensorElement& z) { return cb_norm(associated_map(dual_left(z))); }

DecResult delta_norm(const TensorElement& z, const DecOptions& opts) {
  return dec_norm(associated_map(dual_left(z)), 1, opts);
}

double delta_sampled_lower(const TensorElement& z_in, int samples, std::uint64_t seed) {
  const TensorElement z = dual_left(z_in);
  const Algebra& a = z.left().base;
  const Algebra& b = z.right().base;
  const int n = z.level();
  if (z.is_zero()) return 0.0;
  CounterRng root(seed, 0xde17a);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(s));
    const int k = rng.uniform_int(1, 3);
    const int l = rng.uniform_int(1, 3);
    // phi on A*: a positive contraction in M_k(A), phi(eps_p) = [coord_p(a_xy)].
    const Algebra ak = a.amplified(k);
    CMatrix pos = ak.zero();
    for (int c = 0; c < ak.num_blocks(); ++c) {
      const int o = ak.block_offset(c);
      const int sz = ak.block_size(c);
      pos.block(o, o, sz, sz) = random_psd(rng, sz, rng.uniform_int(1, sz));
    }
    const double pn = op_norm(pos);
    if (pn == 0.0) continue;
    const LevelElement av(Space::primal(a), k, a.block_to_slot(pos / pn, k));
    std::vector<CMatrix> phi(static_cast<std::size_t>(a.dim()), CMatrix(k, k));
    for (int x = 0; x < k; ++x)
      for (int y = 0; y < k; ++y) {
        const CVector c = av.slot_coords(x, y);
        for (int p = 0; p < a.dim(); ++p) phi[static_cast<std::size_t>(p)](x, y) = c(p);
      }
    // psi: B -> M_l with a random positive Choi matrix, scaled to ||psi(1)|| = 1.
    std::vector<CMatrix> choi;
    for (int c = 0; c < b.num_blocks(); ++c) {
      const int sz = b.block_size(c) * l;
      choi.push_back(random_psd(rng, sz, rng.uniform_int(1, sz)));
    }
    LinMap psi(b, Algebra::full(l), choi);
    const double un = unit_image_norm(psi);
    if (un == 0.0) continue;
    psi = psi * cplx(1.0 / un);
    std::vector<CMatrix> psi_img;
    for (int q = 0; q < b.dim(); ++q) psi_img.push_back(psi.image(q));

    const int blk = k * l;
    CMatrix big = CMatrix::Zero(n * blk, n * blk);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < a.dim(); ++p) {
          CMatrix inner = CMatrix::Zero(l, l);
          bool any = false;
          for (int q = 0; q < b.dim(); ++q) {
            const cplx c = z(i, j, p, q);
            if (c == cplx(0.0)) continue;
            inner += c * psi_img[static_cast<std::size_t>(q)];
            any = true;
          }
          if (any) big.block(i * blk, j * blk, blk, blk) += kron(phi[static_cast<std::size_t>(p)], inner);
        }
    best = std::max(best, op_norm(big));
  }
  return best;
}

PairingResult dec_ball_pairing(const TensorElement& z_in, const SdpOptions& opts) {
  const TensorElement z = primal_left(z_in);
  if (z.level() != 1) throw DomainError("dec_ball_pairing: expects a level-1 element");
  const Algebra& a = z.left().base;
  const Algebra& b = z.right().base;
  PairingResult r;
  const double scale = z.max_abs_coeff();
  if (scale == 0.0) {
    r.maximizer = LinMap::zero(a, b);
    r.solver.status = "zero";
    return r;
  }
  SdpProblem p;
  p.sense = SdpSense::maximize;
  const auto layout = detail::add_dec_variables(p, a, b);
  detail::add_unit_bound(p, layout, 0, -1, 1.0);
  detail::add_unit_bound(p, layout, 1, -1, 1.0);
  detail::add_pairing_objective(p, layout, z.slot(0, 0) / scale);
  const SdpSolution sol = solve(p, opts);
  if (sol.status == SdpStatus::infeasible || sol.status == SdpStatus::unbounded) {
    throw SolverFailure("dec_ball_pairing: SDP reported " + to_string(sol.status), sol.iterations,
                        sol.primal_infeasibility);
  }
  r.value_lower = sol.primal_value * scale;
  r.value_upper = sol.dual_value * scale;
  r.maximizer = detail::extract_map(layout, sol, 2);
  r.solver = {sol.iterations, sol.gap, to_string(sol.status)};
  return r;
}

ProjectiveCrossCheck cross_check_projective(const TensorElement& z_in, const SdpOptions& opts) {
  const TensorElement z = primal_left(z_in);
  ProjectiveCrossCheck out;
  out.delta_ball_value = dec_ball_pairing(z, opts).value_lower;
  const double scale = z.max_abs_coeff();
  if (scale == 0.0) return out;
  // Averaged form of the cb ball: S1(1) <= s1, S2(1) <= s2, s1 + s2 = 2.
  SdpProblem p;
  p.sense = SdpSense::maximize;
  const int s1 = p.add_variable(1);
  const int s2 = p.add_variable(1);
  const auto layout = detail::add_dec_variables(p, z.left().base, z.right().base);
  detail::add_unit_bound(p, layout, 0, s1, 0.0);
  detail::add_unit_bound(p, layout, 1, s2, 0.0);
  p.add_constraint({{s1, 0, 0, 1.0}, {s2, 0, 0, 1.0}}, 2.0);
  detail::add_pairing_objective(p, layout, z.slot(0, 0) / scale);
  const SdpSolution sol = solve(p, opts);
  if (sol.status == SdpStatus::infeasible || sol.status == SdpStatus::unbounded) {
    throw SolverFailure("cross_check_projective: SDP reported " + to_string(sol.status), sol.iterations,
                        sol.primal_infeasibility);
  }
  out.cb_ball_value = sol.primal_value * scale;
  return out;
}

namespace {

// Sum over slots of sum_k sigma_k ||v_k|| ||w_k|| from an SVD of each slot.
double rank_bound(const TensorElement& z) {
  double total = 0.0;
  for (int i = 0; i < z.level(); ++i)
    for (int j = 0; j < z.level(); ++j) {
      const CMatrix s = z.slot(i, j);
      if (s.isZero(0.0)) continue;
      Eigen::JacobiSVD<CMatrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) <= 1e-15 * sv(0)) break;
        const CVector v = svd.matrixU().col(k);
        const CVector w = svd.matrixV().col(k).conjugate();
        total += sv(k) * element_norm(z.left(), v) * element_norm(z.right(), w);
      }
    }
  return total;
}

// min s subject to [[1 (x) w, z], [z*, 1 (x) w']] = alpha (V_A (x) G) alpha* with
// V_A = (+)_b [e_xy], G in M_2nD(B*)^+, w(1), w'(1) <= s.
SdpSolution completion_sdp(const TensorElement& z, double scale, const SdpOptions& opts) {
  const Algebra& a = z.left().base;
  const Algebra& b = z.right().base;
  const int n = z.level();
  const int d = a.side();
  const int big = 2 * n * d;
  std::vector<int> block_of(static_cast<std::size_t>(d));
  for (int bb = 0; bb < a.num_blocks(); ++bb)
    for (int x = 0; x < a.block_size(bb); ++x) block_of[static_cast<std::size_t>(a.block_offset(bb) + x)] = bb;

  SdpProblem p;
  p.sense = SdpSense::minimize;
  const int sv = p.add_variable(1);
  p.add_objective(sv, 0, 0, 1.0);
  std::vector<int> g;
  std::vector<int> w1;
  std::vector<int> w2;
  for (int c = 0; c < b.num_blocks(); ++c) {
    g.push_back(p.add_variable(b.block_size(c) * big));
    w1.push_back(p.add_variable(b.block_size(c) * n));
    w2.push_back(p.add_variable(b.block_size(c) * n));
  }
  // w(1) + Y - s I = 0 for both corners.
  for (const auto* w : {&w1, &w2}) {
    const int y = p.add_variable(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int part = 0; part < (i == j ? 1 : 2); ++part) {
          std::vector<SdpTerm> terms;
          auto entry = [&](int var, int r, int c) {
            auto t = part == 0 ? SdpProblem::real_entry(var, r, c) : SdpProblem::imag_entry(var, r, c);
            terms.insert(terms.end(), t.begin(), t.end());
          };
          for (int c = 0; c < b.num_blocks(); ++c)
            for (int r = 0; r < b.block_size(c); ++r) entry((*w)[static_cast<std::size_t>(c)], r * n + i, r * n + j);
          entry(y, i, j);
          if (i == j) terms.push_back({sv, 0, 0, -1.0});
          p.add_constraint(std::move(terms), 0.0);
        }
  }
  // Same-block entries of G are pinned by the 2x2 element.
  for (int c = 0; c < b.num_blocks(); ++c) {
    const int m = b.block_size(c);
    const int gv = g[static_cast<std::size_t>(c)];
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s)
        for (int bi = 0; bi < 2 * n; ++bi)
          for (int x = 0; x < d; ++x)
            for (int bj = 0; bj < 2 * n; ++bj)
              for (int y = 0; y < d; ++y) {
                if (block_of[static_cast<std::size_t>(x)] != block_of[static_cast<std::size_t>(y)]) continue;
                const int row = r * big + bi * d + x;
                const int col = s * big + bj * d + y;
                if (row > col) continue;
                const int bb = block_of[static_cast<std::size_t>(x)];
                const int o = a.block_offset(bb);
                const bool top = bi < n;
                const bool left = bj < n;
                cplx target(0.0);
                int wvar = -1;
                int wr = 0;
                int wc = 0;
                if (top == left) {
                  if (x == y) {
                    wvar = top ? w1[static_cast<std::size_t>(c)] : w2[static_cast<std::size_t>(c)];
                    wr = r * n + (top ? bi : bi - n);
                    wc = s * n + (left ? bj : bj - n);
                  }
                } else if (top) {
                  target = z(bi, bj - n, a.index_of(bb, x - o, y - o), b.index_of(c, r, s)) / scale;
                } else {
                  target = std::conj(z(bj, bi - n, a.index_of(bb, y - o, x - o), b.index_of(c, s, r))) / scale;
                }
                for (int part = 0; part < (row == col ? 1 : 2); ++part) {
                  auto terms = part == 0 ? SdpProblem::real_entry(gv, row, col) : SdpProblem::imag_entry(gv, row, col);
                  if (wvar >= 0) {
                    auto wt = part == 0 ? SdpProblem::real_entry(wvar, wr, wc) : SdpProblem::imag_entry(wvar, wr, wc);
                    for (auto& e : wt) {
                      e.value = -e.value;
                      terms.push_back(e);
                    }
                  }
                  p.add_constraint(std::move(terms), part == 0 ? target.real() : target.imag());
                }
              }
  }
  return solve(p, opts);
}

}  // namespace

DeltaUpper Delta_primal_upper_report(const TensorElement& z_in, const SdpOptions& opts, bool use_completion) {
  const TensorElement z = primal_left(z_in);
  DeltaUpper out;
  if (z.is_zero()) return out;
  out.rank_value = rank_bound(z);
  out.value = out.rank_value;
  if (use_completion) {
    const double scale = z.max_abs_coeff();
    const SdpSolution sol = completion_sdp(z, scale, opts);
    if (sol.status == SdpStatus::optimal) {
      out.completion_solved = true;
      out.completion_value = sol.primal_value * scale;
      out.value = std::min(out.value, out.completion_value);
    }
  }
  return out;
}

double Delta_primal_upper(const TensorElement& z) { return Delta_primal_upper_report(z).value; }

namespace {

// z~[p][(k, l, q)] = sum_ij conj(xi_ik) eta_jl z_ijpq over A (x) M_n(B)*.
TensorElement contract(const TensorElement& z, const CVector& xi, const CVector& eta) {
  const Algebra& a = z.left().base;
  const Algebra& b = z.right().base;
  const int n = z.level();
  const Algebra bn = b.amplified(n);
  TensorElement out = TensorElement::zero(Space::primal(a), Space::dual(bn), 1);
  for (int c = 0; c < b.num_blocks(); ++c) {
    const int m = b.block_size(c);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int r = 0; r < m; ++r)
          for (int s = 0; s < m; ++s) {
            const int q = b.index_of(c, r, s);
            const int qt = bn.index_of(c, k * m + r, l * m + s);
            for (int p = 0; p < a.dim(); ++p) {
              cplx acc(0.0);
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) acc += std::conj(xi(i * n + k)) * eta(j * n + l) * z(i, j, p, q);
              out(0, 0, p, qt) = acc;
            }
          }
  }
  return out;
}

// N_{(i,k),(j,l)} = <T_kl, z_ij> for T: A -> M_n(B).
CMatrix pairing_matrix(const TensorElement& z, const LinMap& t) {
  const Algebra& a = z.left().base;
  const Algebra& b = z.right().base;
  const int n = z.level();
  const Algebra bn = b.amplified(n);
  const CMatrix kt = t.coefficients();
  CMatrix out = CMatrix::Zero(n * n, n * n);
  for (int c = 0; c < b.num_blocks(); ++c) {
    const int m = b.block_size(c);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int r = 0; r < m; ++r)
          for (int s = 0; s < m; ++s) {
            const int q = b.index_of(c, r, s);
            const int qt = bn.index_of(c, k * m + r, l * m + s);
            for (int p = 0; p < a.dim(); ++p) {
              const cplx kv = kt(p, qt);
              if (kv == cplx(0.0)) continue;
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out(i * n + k, j * n + l) += z(i, j, p, q) * kv;
            }
          }
  }
  return out;
}

}  // namespace

DeltaBracket Delta_norm(const TensorElement& z_in, const DeltaOptions& opts) {
  const TensorElement z = primal_left(z_in);
  DeltaBracket out;
  if (z.is_zero()) {
    out.solver.status = "zero";
    return out;
  }
  if (z.level() == 1) {
    const PairingResult pr = dec_ball_pairing(z, opts.sdp);
    out.value_lower = pr.value_lower;
    out.value_upper = std::max(pr.value_upper, pr.value_lower);
    out.solver = pr.solver;
    return out;
  }
  const int n = z.level();
  CounterRng root(opts.seed, 0xa17);
  double best = 0.0;
  bool settled_all = true;
  for (int rs = 0; rs < std::max(1, opts.restarts); ++rs) {
    CVector xi = CVector::Zero(n * n);
    CVector eta;
    if (rs == 0) {
      for (int i = 0; i < n; ++i) xi(i * n + i) = 1.0 / std::sqrt(static_cast<double>(n));
      eta = xi;
    } else {
      CounterRng rng = root.derive(static_cast<std::uint64_t>(rs));
      xi = random_gaussian(rng, n * n, 1).col(0).normalized();
      eta = random_gaussian(rng, n * n, 1).col(0).normalized();
    }
    double last = -1.0;
    bool settled = false;
    for (int it = 0; it < opts.max_alternations; ++it) {
      const PairingResult pr = dec_ball_pairing(contract(z, xi, eta), opts.sdp);
      out.solver.iterations += pr.solver.iterations;
      out.solver.gap = std::max(out.solver.gap, pr.solver.gap);
      out.solver.status = pr.solver.status;
      const CMatrix nm = pairing_matrix(z, pr.maximizer);
      Eigen::JacobiSVD<CMatrix> svd(nm, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double val = svd.singularValues()(0);
      best = std::max(best, val);
      if (val <= last + opts.alternation_tol * std::max(1.0, val)) {
        settled = true;
        break;
      }
      last = val;
      xi = svd.matrixU().col(0);
      eta = svd.matrixV().col(0);
    }
    settled_all = settled_all && settled;
  }
  out.value_lower = best;
  out.warning = !settled_all;
  out.value_upper = Delta_primal_upper_report(z, opts.sdp, !opts.cheap_upper).value;
  return out;
}

}  // namespace decnorm
