#include <algorithm>
#include <cmath>

#include "decnorm/errors.hpp"
#include "decnorm/norms.hpp"
#include "decnorm/random.hpp"

namespace decnorm {

namespace {

// ||T_c||_cb for the component into target block c, as the diamond norm of
// the trace dual: maximize sum_b Re sum C_xy P_b(x, y) subject to
// [[I (x) rho0, P_b], [P_b*, I (x) rho1]] >= 0 with rho0, rho1 states.
SdpSolution cb_component(const LinMap& t, int c, double scale, const SdpOptions& opts) {
  const Algebra& a = t.source();
  const int m = t.target().block_size(c);
  SdpProblem p;
  p.sense = SdpSense::maximize;
  const int rho0 = p.add_variable(m);
  const int rho1 = p.add_variable(m);
  for (int rho : {rho0, rho1}) {
    std::vector<SdpTerm> tr;
    for (int r = 0; r < m; ++r) tr.push_back({rho, r, r, 1.0});
    p.add_constraint(std::move(tr), 1.0);
  }
  for (int b = 0; b < a.num_blocks(); ++b) {
    const int nb = a.block_size(b);
    const int n = nb * m;
    const int q = p.add_variable(2 * n);
    const CMatrix& ch = t.choi(b, c);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (ch(u, v) != cplx(0.0)) p.add_objective(q, n + v, u, ch(u, v) / scale);
    for (int side = 0; side < 2; ++side) {
      const int off = side * n;
      const int rho = side == 0 ? rho0 : rho1;
      for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v) {
          const int x = u / m;
          const int y = v / m;
          for (int part = 0; part < (u == v ? 1 : 2); ++part) {
            auto terms = part == 0 ? SdpProblem::real_entry(q, off + u, off + v)
                                   : SdpProblem::imag_entry(q, off + u, off + v);
            if (x == y) {
              auto rt = part == 0 ? SdpProblem::real_entry(rho, u % m, v % m)
                                  : SdpProblem::imag_entry(rho, u % m, v % m);
              for (auto& e : rt) {
                e.value = -e.value;
                terms.push_back(e);
              }
            }
            p.add_constraint(std::move(terms), 0.0);
          }
        }
    }
  }
  return solve(p, opts);
}

CMatrix apply_amplified(const LinMap& t, const CMatrix& x_slots, int d) {
  const int sa = t.source().side();
  const int sb = t.target().side();
  CMatrix out = CMatrix::Zero(d * sb, d * sb);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.block(i * sb, j * sb, sb, sb) = t.apply(x_slots.block(i * sa, j * sa, sa, sa));
  return out;
}

}  // namespace

double cb_power_lower(const LinMap& t, int restarts, int iters, std::uint64_t seed) {
  const Algebra& a = t.source();
  const int d = a.side();
  const int sb = t.target().side();
  const Algebra amp = a.amplified(d);
  std::vector<CMatrix> images;
  for (int p = 0; p < a.dim(); ++p) images.push_back(t.image(p));

  CounterRng root(seed, 0xcb);
  double best = 0.0;
  for (int rs = 0; rs < std::max(1, restarts); ++rs) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(rs));
    CMatrix x = amp.zero();
    for (int b = 0; b < amp.num_blocks(); ++b) {
      const int o = amp.block_offset(b);
      const int s = amp.block_size(b);
      x.block(o, o, s, s) = random_unitary(rng, s);
    }
    double last = -1.0;
    for (int it = 0; it < iters; ++it) {
      const CMatrix tx = apply_amplified(t, a.block_to_slot(x, d), d);
      Eigen::JacobiSVD<CMatrix> svd(tx, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double val = svd.singularValues()(0);
      best = std::max(best, val);
      if (val <= last * (1.0 + 1e-12) + 1e-15) break;
      last = val;
      const CVector xi = svd.matrixU().col(0);
      const CVector eta = svd.matrixV().col(0);
      CMatrix xi_m(sb, d);
      CMatrix eta_m(sb, d);
      for (int i = 0; i < d; ++i) {
        xi_m.col(i) = xi.segment(i * sb, sb);
        eta_m.col(i) = eta.segment(i * sb, sb);
      }
      // Maximize Re sum K o X over the unit ball: X = V U* from K^T = U S V*.
      for (int b = 0; b < a.num_blocks(); ++b) {
        const int nb = a.block_size(b);
        CMatrix k(d * nb, d * nb);
        for (int xr = 0; xr < nb; ++xr)
          for (int yc = 0; yc < nb; ++yc) {
            const CMatrix kij = xi_m.adjoint() * images[static_cast<std::size_t>(a.index_of(b, xr, yc))] * eta_m;
            for (int i = 0; i < d; ++i)
              for (int j = 0; j < d; ++j) k(i * nb + xr, j * nb + yc) = kij(i, j);
          }
        Eigen::JacobiSVD<CMatrix> ks(k.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const int o = amp.block_offset(b);
        x.block(o, o, d * nb, d * nb) = ks.matrixV() * ks.matrixU().adjoint();
      }
    }
  }
  return best;
}

CbResult cb_norm_report(const LinMap& t, const CbOptions& opts) {
  CbResult r;
  double scale = 0.0;
  for (const auto& c : t.choi_blocks()) scale = std::max(scale, max_abs(c));
  if (scale == 0.0) {
    r.solver.status = "zero";
    return r;
  }
  for (int c = 0; c < t.target().num_blocks(); ++c) {
    const SdpSolution sol = cb_component(t, c, scale, opts.sdp);
    if (sol.status == SdpStatus::infeasible || sol.status == SdpStatus::unbounded) {
      throw SolverFailure("cb_norm: SDP reported " + to_string(sol.status), sol.iterations, sol.primal_infeasibility);
    }
    r.value = std::max(r.value, sol.primal_value * scale);
    r.solver.iterations += sol.iterations;
    r.solver.gap = std::max(r.solver.gap, sol.gap);
    if (r.solver.status == "none" || sol.status != SdpStatus::optimal) r.solver.status = to_string(sol.status);
  }
  if (opts.power_bound) r.lower_bound = cb_power_lower(t, opts.restarts, opts.power_iters, opts.seed);
  return r;
}

double cb_norm(const LinMap& t) {
  CbOptions o;
  o.power_bound = false;
  return cb_norm_report(t, o).value;
}

}  // namespace decnorm
