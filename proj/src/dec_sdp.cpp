#include "dec_sdp.hpp"

namespace decnorm::detail {

DecLayout add_dec_variables(SdpProblem& p, const Algebra& source, const Algebra& target) {
  DecLayout l{source, target, {}, {}, {}};
  for (int b = 0; b < source.num_blocks(); ++b)
    for (int c = 0; c < target.num_blocks(); ++c) l.q.push_back(p.add_variable(2 * source.block_size(b) * target.block_size(c)));
  for (int c = 0; c < target.num_blocks(); ++c) {
    l.y1.push_back(p.add_variable(target.block_size(c)));
    l.y2.push_back(p.add_variable(target.block_size(c)));
  }
  return l;
}

void add_unit_bound(SdpProblem& p, const DecLayout& l, int side, int bound_var, double rhs_scale) {
  for (int c = 0; c < l.target.num_blocks(); ++c) {
    const int m = l.target.block_size(c);
    const int y = side == 0 ? l.y1[static_cast<std::size_t>(c)] : l.y2[static_cast<std::size_t>(c)];
    for (int r = 0; r < m; ++r)
      for (int s = r; s < m; ++s) {
        for (int part = 0; part < (r == s ? 1 : 2); ++part) {
          std::vector<SdpTerm> terms;
          auto entry = [&](int var, int i, int j) {
            auto t = part == 0 ? SdpProblem::real_entry(var, i, j) : SdpProblem::imag_entry(var, i, j);
            terms.insert(terms.end(), t.begin(), t.end());
          };
          for (int b = 0; b < l.source.num_blocks(); ++b) {
            const int off = side == 0 ? 0 : l.half(b, c);
            for (int x = 0; x < l.source.block_size(b); ++x) entry(l.q_var(b, c), off + x * m + r, off + x * m + s);
          }
          entry(y, r, s);
          double rhs = 0.0;
          if (r == s) {
            if (bound_var >= 0) terms.push_back({bound_var, 0, 0, -1.0});
            rhs = rhs_scale;
          }
          p.add_constraint(std::move(terms), rhs);
        }
      }
  }
}

void fix_off_diagonal(SdpProblem& p, const DecLayout& l, const LinMap& t) {
  for (int b = 0; b < l.source.num_blocks(); ++b)
    for (int c = 0; c < l.target.num_blocks(); ++c) {
      const int n = l.half(b, c);
      const CMatrix& ch = t.choi(b, c);
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          p.add_constraint(SdpProblem::real_entry(l.q_var(b, c), u, n + v), ch(u, v).real());
          p.add_constraint(SdpProblem::imag_entry(l.q_var(b, c), u, n + v), ch(u, v).imag());
        }
    }
}

LinMap extract_map(const DecLayout& l, const SdpSolution& s, int side) {
  std::vector<CMatrix> blocks;
  for (int b = 0; b < l.source.num_blocks(); ++b)
    for (int c = 0; c < l.target.num_blocks(); ++c) {
      const int n = l.half(b, c);
      const CMatrix& q = s.variable_values[static_cast<std::size_t>(l.q_var(b, c))];
      if (side == 2) {
        blocks.push_back(q.block(0, n, n, n));
      } else {
        const int off = side == 0 ? 0 : n;
        blocks.push_back(hermitian_part(q.block(off, off, n, n)));
      }
    }
  return {l.source, l.target, std::move(blocks)};
}

void add_pairing_objective(SdpProblem& p, const DecLayout& l, const CMatrix& z) {
  for (int b = 0; b < l.source.num_blocks(); ++b) {
    const int nb = l.source.block_size(b);
    for (int c = 0; c < l.target.num_blocks(); ++c) {
      const int m = l.target.block_size(c);
      const int n = nb * m;
      for (int x = 0; x < nb; ++x)
        for (int y = 0; y < nb; ++y) {
          const int pi = l.source.index_of(b, x, y);
          for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) {
              const cplx zv = z(pi, l.target.index_of(c, r, s));
              if (zv == cplx(0.0)) continue;
              // Re tr(H Q) picks Q(u, n + v) through H(n + v, u).
              p.add_objective(l.q_var(b, c), n + y * m + s, x * m + r, zv);
            }
        }
    }
  }
}

}  // namespace decnorm::detail
