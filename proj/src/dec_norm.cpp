#include <algorithm>

#include "dec_sdp.hpp"
#include "decnorm/errors.hpp"
#include "decnorm/norms.hpp"

namespace decnorm {

namespace {

double choi_scale(const LinMap& t) {
  double s = 0.0;
  for (const auto& c : t.choi_blocks()) s = std::max(s, max_abs(c));
  return s;
}

DecResult dec_trivial(const LinMap& s, double value, const char* status) {
  DecResult r;
  r.value = value;
  r.witness = {s, s, value};
  r.solver.status = status;
  return r;
}

}  // namespace

DecResult dec_norm(const LinMap& t_in, int level, const DecOptions& opts) {
  const LinMap t = amplify(t_in, level);
  const double scale = choi_scale(t);
  if (scale == 0.0) return dec_trivial(t, 0.0, "zero");
  if (opts.cp_shortcut && is_cp(t)) return dec_trivial(t, unit_image_norm(t), "cp-shortcut");

  const LinMap ts = t * cplx(1.0 / scale);
  SdpProblem p;
  p.sense = SdpSense::minimize;
  const int tv = p.add_variable(1);
  p.add_objective(tv, 0, 0, 1.0);
  const auto layout = detail::add_dec_variables(p, t.source(), t.target());
  detail::fix_off_diagonal(p, layout, ts);
  detail::add_unit_bound(p, layout, 0, tv, 0.0);
  detail::add_unit_bound(p, layout, 1, tv, 0.0);

  const SdpSolution sol = solve(p, opts.sdp);
  if (sol.status == SdpStatus::infeasible || sol.status == SdpStatus::unbounded) {
    throw SolverFailure("dec_norm: SDP reported " + to_string(sol.status), sol.iterations, sol.primal_infeasibility);
  }
  DecResult r;
  r.value = sol.primal_value * scale;
  r.witness.s1 = detail::extract_map(layout, sol, 0) * cplx(scale);
  r.witness.s2 = detail::extract_map(layout, sol, 1) * cplx(scale);
  r.witness.value = std::max(unit_image_norm(r.witness.s1), unit_image_norm(r.witness.s2));
  r.solver = {sol.iterations, sol.gap, to_string(sol.status)};
  return r;
}

DecWitness decompose(const LinMap& t, const DecOptions& opts) { return dec_norm(t, 1, opts).witness; }

}  // namespace decnorm
