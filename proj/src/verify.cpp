#include "decnorm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "decnorm/errors.hpp"

namespace decnorm {

// ---------------------------------------------------------------- generators

Algebra random_algebra(CounterRng& rng, int max_side) {
  const int side = rng.uniform_int(1, std::max(1, max_side));
  std::vector<int> blocks;
  int left = side;
  while (left > 0) {
    const int b = rng.uniform_int(1, left);
    blocks.push_back(b);
    left -= b;
  }
  return Algebra(blocks);
}

LinMap random_map(CounterRng& rng, const Algebra& source, const Algebra& target) {
  std::vector<CMatrix> choi;
  for (int b = 0; b < source.num_blocks(); ++b)
    for (int c = 0; c < target.num_blocks(); ++c) {
      const int s = source.block_size(b) * target.block_size(c);
      choi.push_back(random_gaussian(rng, s, s) / std::sqrt(static_cast<double>(s)));
    }
  return {source, target, choi};
}

LinMap random_cp_map(CounterRng& rng, const Algebra& source, const Algebra& target) {
  std::vector<CMatrix> choi;
  for (int b = 0; b < source.num_blocks(); ++b)
    for (int c = 0; c < target.num_blocks(); ++c) {
      const int s = source.block_size(b) * target.block_size(c);
      choi.push_back(random_psd(rng, s, rng.uniform_int(1, s)) / static_cast<double>(s));
    }
  return {source, target, choi};
}

TensorElement random_tensor(CounterRng& rng, const Space& left, const Space& right, int level) {
  TensorElement z = TensorElement::zero(left, right, level);
  const double s = 1.0 / std::sqrt(static_cast<double>(left.dim() * right.dim()));
  for (int i = 0; i < level; ++i)
    for (int j = 0; j < level; ++j)
      for (int p = 0; p < left.dim(); ++p)
        for (int q = 0; q < right.dim(); ++q) z(i, j, p, q) = rng.complex_normal() * s;
  return z;
}

TensorElement unitary_instance(CounterRng& rng, int n, int d) {
  const Algebra a = Algebra::diagonal(n);
  const Algebra b = Algebra::full(d);
  TensorElement z = TensorElement::zero(Space::primal(a), Space::dual(b), 1);
  for (int k = 0; k < n; ++k) {
    const CMatrix u = random_unitary(rng, d);
    // The functional x -> tr(x u)/d has coordinates u_sr / d on e_rs.
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) z(0, 0, k, b.index_of(0, r, s)) = u(s, r) / static_cast<double>(d);
  }
  return z;
}

TensorElement tensor_level_compress(const TensorElement& z, const CMatrix& alpha) {
  if (alpha.rows() != z.level()) throw DomainError("tensor_level_compress: alpha must have level(z) rows");
  const int n = z.level();
  const int m = static_cast<int>(alpha.cols());
  TensorElement out = TensorElement::zero(z.left(), z.right(), m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const cplx w = std::conj(alpha(i, a)) * alpha(j, b);
          if (w == cplx(0.0)) continue;
          for (int p = 0; p < z.left().dim(); ++p)
            for (int q = 0; q < z.right().dim(); ++q) out(a, b, p, q) += w * z(i, j, p, q);
        }
  return out;
}

SdpProblem random_feasible_sdp(CounterRng& rng, int max_side, int max_rows) {
  SdpProblem p;
  int left = rng.uniform_int(1, std::max(1, max_side));
  const int nvars = std::min(left, rng.uniform_int(1, 3));
  for (int k = 0; k < nvars; ++k) {
    const int d = k + 1 == nvars ? left : rng.uniform_int(1, left - (nvars - k - 1));
    p.add_variable(d);
    left -= d;
  }
  int total_real = 0;
  for (int d : p.dims) total_real += d * d;
  const int rows = rng.uniform_int(1, std::max(1, std::min(max_rows, total_real)));

  std::vector<CMatrix> x0;
  std::vector<CMatrix> c;
  for (int d : p.dims) {
    x0.push_back(random_psd(rng, d) + CMatrix::Identity(d, d));
    c.push_back(random_psd(rng, d) + CMatrix::Identity(d, d));
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<SdpTerm> terms;
    const double y0 = rng.normal();
    for (std::size_t j = 0; j < p.dims.size(); ++j) {
      const CMatrix a = random_hermitian(rng, p.dims[j]);
      auto t = SdpProblem::matrix_terms(static_cast<int>(j), a);
      terms.insert(terms.end(), t.begin(), t.end());
      c[j] += y0 * a;
    }
    const double rhs = evaluate_terms(terms, x0);
    p.add_constraint(std::move(terms), rhs);
  }
  for (std::size_t j = 0; j < p.dims.size(); ++j) p.add_objective_matrix(static_cast<int>(j), c[j]);
  return p;
}

namespace {

// ---------------------------------------------------------------- harness

struct Check {
  std::string quantity;
  double margin;
};

struct TrialContext {
  CounterRng rng;
  const SuiteConfig& cfg;
  std::vector<Check> checks;
  std::vector<double> observed;
  json instance = json::object();

  /// margin > 0 means the asserted relation fails by that amount.
  void check(const std::string& q, double margin) { checks.push_back({q, margin}); }
};

struct TrialOutcome {
  std::vector<Check> checks;
  std::vector<double> observed;
  json instance;
  std::string error_tag;
  std::string error_what;
};

using TrialFn = std::function<void(TrialContext&)>;

struct SuiteDef {
  double tolerance;
  int default_trials;
  TrialFn trial;
};

int level_for(TrialContext& c) { return c.rng.uniform_int(1, std::max(1, c.cfg.max_level)); }

int cap(const TrialContext& c, int limit) { return std::max(1, std::min(c.cfg.dims, limit)); }

DecOptions sdp_dec() {
  DecOptions o;
  o.cp_shortcut = false;
  return o;
}

double rel(double x, double scale) { return x / std::max(1.0, std::abs(scale)); }

// Tensor of a random cp map A -> M_n(B), i.e. a delta-cone member in M_n(A* (x) B).
TensorElement random_cone_member(CounterRng& rng, const Algebra& a, const Algebra& b, int n) {
  return tensor_of_map(random_cp_map(rng, a, b.amplified(n)), b, n);
}

LevelElement random_primal(CounterRng& rng, const Algebra& a, int n) {
  const Algebra amp = a.amplified(n);
  CMatrix x = amp.zero();
  for (int c = 0; c < amp.num_blocks(); ++c) {
    const int o = amp.block_offset(c);
    const int s = amp.block_size(c);
    x.block(o, o, s, s) = random_gaussian(rng, s, s);
  }
  return {Space::primal(a), n, a.block_to_slot(x, n)};
}

LevelElement random_dual(CounterRng& rng, const Algebra& a, int n) {
  CVector c(n * n * a.dim());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.complex_normal();
  return LevelElement::from_coords(Space::dual(a), n, c);
}

cplx pairing(const LinMap& t, const TensorElement& z) {
  const CMatrix k = t.coefficients();
  cplx s(0.0);
  for (int p = 0; p < z.left().dim(); ++p)
    for (int q = 0; q < z.right().dim(); ++q) s += z(0, 0, p, q) * k(p, q);
  return s;
}

// ---------------------------------------------------------------- suites

void suite_regularity(TrialContext& c) {
  const bool dual = c.rng.uniform_int(0, 2) == 0;
  const Algebra a = random_algebra(c.rng, cap(c, dual ? 2 : 4));
  const int n = level_for(c);
  const double rho = 0.1 + 0.85 * c.rng.uniform();
  const bool zero = c.rng.uniform_int(0, 4) == 0;
  LevelElement x = dual ? random_dual(c.rng, a, n) : random_primal(c.rng, a, n);
  if (zero) {
    x = LevelElement::zero(x.space(), n);
  } else {
    x = x * cplx(rho / level_norm(x));
  }
  c.instance = {{"element", to_json(x)}};
  const RegularityWitness w = regularity_witness(x);
  auto neg_part = [&](const LevelElement& e) {
    if (e.space().is_dual) return -choi_min_eig(e.as_map());
    return -eig_hermitian(HermitianMatrix(e.matrix())).values.minCoeff();
  };
  auto norm = [&](const LevelElement& e) {
    return e.space().is_dual ? unit_image_norm(e.as_map()) : op_norm(e.matrix());
  };
  c.check("a_positive", neg_part(w.a));
  c.check("d_positive", neg_part(w.d));
  c.check("block_positive", neg_part(w.block));
  c.check("a_norm_below_1", norm(w.a) - 1.0);
  c.check("d_norm_below_1", norm(w.d) - 1.0);
  c.check("block_corner_matches", max_abs(w.block.matrix() - block_matrix(w.a, x, x.adjoint(), w.d).matrix()));
  if (zero && !dual) c.check("zero_gives_half_unit", max_abs(w.a.matrix() - 0.5 * LevelElement::unit(x.space(), n).matrix()));
}

void suite_cone_arith(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const int n = level_for(c);
  const TensorElement z1 = random_cone_member(c.rng, a, b, n);
  const TensorElement z2 = random_cone_member(c.rng, a, b, n);
  c.instance = {{"z1", to_json(z1)}, {"z2", to_json(z2)}};
  const double lambda = 0.1 + 3.0 * c.rng.uniform();
  const int m = c.rng.uniform_int(1, 3);
  const CMatrix alpha = random_gaussian(c.rng, n, m);
  auto neg = [](const TensorElement& z) { return -choi_min_eig(associated_map(z)); };
  c.check("sum_in_cone", neg(z1 + z2));
  c.check("scalar_in_cone", neg(z1 * cplx(lambda)));
  c.check("compression_in_cone", neg(tensor_level_compress(z1, alpha)));
  // Properness: -z1 is a member only when z1 = 0.
  const double top = -choi_min_eig(associated_map(z1 * cplx(-1.0)));
  c.check("proper_cone", z1.is_zero() ? 0.0 : -top);
  c.check("self_adjoint_members", (z1 - z1.adjoint()).max_abs_coeff());
  const auto sum = cone_member_Delta(z1 + z2);
  c.check("Delta_cone_sum", sum.member ? 0.0 : 1.0);
}

void suite_subcross(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const bool two = c.cfg.max_level >= 2 && c.rng.uniform_int(0, 3) == 0;
  const int k = two && c.rng.uniform_int(0, 1) == 0 ? 2 : 1;
  const int l = two && k == 1 ? 2 : 1;
  const LevelElement v = random_primal(c.rng, a, k);
  const LevelElement w = random_dual(c.rng, b, l);
  const CMatrix id = CMatrix::Identity(k * l, k * l);
  const TensorElement z = tensor_compress(id, v, w, id);
  c.instance = {{"v", to_json(v)}, {"w", to_json(w)}};
  const double bound = level_norm(v) * level_norm(w);
  const DeltaBracket d = Delta_norm(z);
  c.observed.push_back(d.value_lower / bound);
  c.check("Delta_le_product", rel(d.value_lower - bound, bound));
}

void suite_delta_le_Delta(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const int n = c.cfg.max_level >= 2 && c.rng.uniform_int(0, 3) == 0 ? 2 : 1;
  const Space sa = Space::primal(a);
  const Space sb = Space::dual(b);
  const TensorElement z = random_tensor(c.rng, sa, sb, n);
  c.instance = {{"z", to_json(z)}};
  const double dz = delta_norm(z).value;
  const DeltaBracket bz = Delta_norm(z);
  c.check("delta_le_Delta", rel(dz - bz.value_upper, dz));
  c.check("Delta_bracket_ordered", rel(bz.value_lower - bz.value_upper, bz.value_upper));
  if (n == 1) {
    const TensorElement z2 = random_tensor(c.rng, sa, sb, 1);
    c.instance["z2"] = to_json(z2);
    const double d2 = delta_norm(z2).value;
    c.check("delta_subadditive", rel(delta_norm(z + z2).value - dz - d2, dz + d2));
    const DeltaBracket b2 = Delta_norm(z2);
    const DeltaBracket bs = Delta_norm(z + z2);
    c.check("Delta_subadditive", rel(bs.value_lower - bz.value_upper - b2.value_upper, bz.value_upper + b2.value_upper));
    c.check("delta_diagonal_max", rel(delta_norm(tensor_diag(z, z2)).value - std::max(dz, d2), dz));
  }
}

void suite_positive_lemma(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const int n = level_for(c);
  const TensorElement z = random_cone_member(c.rng, a, b, n);
  c.instance = {{"z", to_json(z)}};
  const double d = delta_norm(z, sdp_dec()).value;
  const double inj = inj_norm(z);
  const double sampled = delta_sampled_lower(z, 64, c.rng());
  c.check("delta_eq_inj", rel(std::abs(d - inj), d));
  c.check("sampled_le_delta", rel(sampled - d, d));
  c.check("delta_eq_unit_image", rel(std::abs(d - unit_image_norm(associated_map(z))), d));
}

void suite_duality1(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const TensorElement z = random_tensor(c.rng, Space::primal(a), Space::dual(b), 1);
  const LinMap t = random_map(c.rng, a, b);
  c.instance = {{"z", to_json(z)}, {"T", to_json(t)}};
  const DeltaBracket br = Delta_norm(z);
  const double dec = dec_norm(t).value;
  const double pair = std::abs(pairing(t, z));
  c.check("pairing_bound", rel(pair - dec * br.value_upper, dec * br.value_upper));
  c.check("bracket_closes", rel(br.value_upper - br.value_lower, br.value_upper));
  // The maximizer is in the dec ball and attains the lower value.
  const PairingResult pr = dec_ball_pairing(z);
  c.check("maximizer_in_ball", dec_norm(pr.maximizer).value - 1.0);
  c.check("maximizer_attains", rel(std::abs(pairing(pr.maximizer, z).real() - pr.value_lower), pr.value_lower));
}

void suite_duality2(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const int n = level_for(c);
  const bool member = c.rng.uniform_int(0, 1) == 0;
  const TensorElement z =
      member ? random_cone_member(c.rng, a, b, n) : random_tensor(c.rng, Space::dual(a), Space::primal(b), n);
  c.instance = {{"z", to_json(z)}};
  const LinMap psi = associated_map(z);
  // Only the two finite-dimensional assertions: order isomorphism and isometry.
  const bool cone = cone_member_delta(z);
  c.check("member_iff_cp", cone == is_cp(psi) ? 0.0 : 1.0);
  if (member) c.check("cp_tensors_are_members", cone ? 0.0 : 1.0);
  const double d = delta_norm(z).value;
  c.check("isometry", std::abs(d - dec_norm(psi).value));
}

void suite_pisier(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const int n = level_for(c);
  const TensorElement z = random_tensor(c.rng, Space::dual(a), Space::primal(b), n);
  c.instance = {{"z", to_json(z)}};
  const double d = delta_norm(z).value;
  c.check("sampled_le_delta", rel(delta_sampled_lower(z, 64, c.rng()) - d, d));
  c.check("inj_le_delta", rel(inj_norm(z) - d, d));
  c.check("delta_involution", rel(std::abs(delta_norm(z.adjoint()).value - d), d));
}

void functorial(TrialContext& c, bool cp) {
  const Algebra a1 = random_algebra(c.rng, cap(c, 3));
  const Algebra a2 = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const LinMap phi = cp ? random_cp_map(c.rng, a1, a2) : random_map(c.rng, a1, a2);
  const TensorElement z = random_tensor(c.rng, Space::primal(a1), Space::dual(b), 1);
  c.instance = {{"Phi", to_json(phi)}, {"z", to_json(z)}};
  const double f = cp ? unit_image_norm(phi) : dec_norm(phi).value;
  const TensorElement fz = apply_left(phi, z);
  const double d = delta_norm(z).value;
  c.check("delta_route", rel(delta_norm(fz).value - f * d, f * d));
  const double up = Delta_norm(z).value_upper;
  c.check("Delta_route", rel(Delta_norm(fz).value_lower - f * up, f * up));
  if (cp) c.check("cb_equals_unit_image", rel(std::abs(cb_norm(phi) - f), f));
}

void suite_functorial_cp(TrialContext& c) { functorial(c, true); }
void suite_functorial_dec(TrialContext& c) { functorial(c, false); }

void suite_injective(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const LinMap t = random_map(c.rng, a, b);
  c.instance = {{"T", to_json(t)}};
  const double dec = dec_norm(t, 1, sdp_dec()).value;
  CbOptions co;
  co.seed = c.rng();
  co.restarts = 2;
  const CbResult cb = cb_norm_report(t, co);
  c.check("dec_eq_cb", rel(std::abs(dec - cb.value), dec));
  c.check("power_le_cb", rel(cb.lower_bound - cb.value, cb.value));
  c.check("dec_involution", rel(std::abs(dec_norm(adjoint_map(t), 1, sdp_dec()).value - dec), dec));
}

void suite_ell2(TrialContext& c) {
  const int d = c.rng.uniform_int(1, cap(c, 4));
  const TensorElement z = random_tensor(c.rng, Space::primal(Algebra::diagonal(2)), Space::dual(Algebra::full(d)), 1);
  c.instance = {{"z", to_json(z)}};
  const ProjectiveCrossCheck x = cross_check_projective(z);
  c.check("dec_ball_eq_cb_ball", rel(std::abs(x.delta_ball_value - x.cb_ball_value), x.cb_ball_value));
}

void suite_unitary(TrialContext& c) {
  const int top = std::max(2, std::min(c.cfg.dims, 4));
  const int n = c.rng.uniform_int(2, top);
  const int d = c.rng.uniform_int(2, top);
  const TensorElement z = unitary_instance(c.rng, n, d);
  c.instance = {{"n", n}, {"d", d}, {"z", to_json(z)}};
  const DeltaBracket br = Delta_norm(z);
  c.observed.push_back(br.value_lower);
  c.observed.push_back(br.value_upper);
  c.check("lower_is_1", std::abs(br.value_lower - 1.0));
  c.check("upper_is_1", std::abs(br.value_upper - 1.0));
  const ProjectiveCrossCheck x = cross_check_projective(z);
  c.check("cb_ball_is_1", std::abs(x.cb_ball_value - 1.0));
}

void suite_factorization(TrialContext& c) {
  const Algebra a = random_algebra(c.rng, cap(c, 3));
  const Algebra b = random_algebra(c.rng, cap(c, 3));
  const int n = level_for(c);
  const TensorElement z = random_cone_member(c.rng, a, b, n);
  c.instance = {{"z", to_json(z)}};
  const LinMap psi = associated_map(z);
  const int k_max = psi.source().dim() * psi.target().dim();
  const DeltaConeResult r = cone_member_Delta(z, 1e-6, k_max);
  c.check("witness_found", r.member ? 0.0 : 1.0);
  if (!r.witness) return;
  c.observed.push_back(r.witness->k);
  c.check("k_within_bound", r.witness->k <= k_max ? 0.0 : 1.0);
  c.check("reassembly", map_distance(factorization_map(*r.witness), psi));
  c.check("R_cp", -choi_min_eig(r.witness->r));
  c.check("w_positive", -eig_hermitian(HermitianMatrix(r.witness->w.matrix())).values.minCoeff());
  c.check("implies_delta_cone", cone_member_delta(z) ? 0.0 : 1.0);
}

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> r = {
      {"regularity", {1e-8, 20, suite_regularity}},
      {"cone-arith", {1e-8, 20, suite_cone_arith}},
      {"subcross", {1e-6, 20, suite_subcross}},
      {"delta-le-Delta", {1e-6, 20, suite_delta_le_Delta}},
      {"positive-lemma", {1e-4, 20, suite_positive_lemma}},
      {"duality1", {1e-6, 20, suite_duality1}},
      {"duality2", {1e-6, 20, suite_duality2}},
      {"pisier", {1e-4, 20, suite_pisier}},
      {"functorial-cp", {1e-6, 20, suite_functorial_cp}},
      {"functorial-dec", {1e-6, 20, suite_functorial_dec}},
      {"injective-coincide", {1e-4, 20, suite_injective}},
      {"ell2-coincide", {1e-4, 20, suite_ell2}},
      {"unitary", {1e-4, 25, suite_unitary}},
      {"factorization", {1e-6, 25, suite_factorization}},
  };
  return r;
}

const SuiteDef& def_of(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) {
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown suite \"" + name + "\"; known suites: " + known);
  }
  return it->second;
}

json config_json(const SuiteConfig& cfg) {
  return {{"dims", cfg.dims},
          {"max_level", cfg.max_level},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"first_trial", cfg.first_trial}};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "regularity", "cone-arith", "subcross", "delta-le-Delta", "positive-lemma", "duality1", "duality2",
      "pisier", "functorial-cp", "functorial-dec", "injective-coincide", "ell2-coincide", "unitary", "factorization"};
  return names;
}

double suite_tolerance(const std::string& name) { return def_of(name).tolerance; }
int suite_default_trials(const std::string& name) { return def_of(name).default_trials; }

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg_in) {
  const SuiteDef& def = def_of(name);
  SuiteConfig cfg = cfg_in;
  if (cfg.dims < 1) throw UsageError("--dims must be >= 1");
  if (cfg.max_level < 1) throw UsageError("--level must be >= 1");
  if (cfg.trials < 0) throw UsageError("--trials must be >= 0");
  if (cfg.first_trial < 0) throw UsageError("first trial must be >= 0");
  if (cfg.trials == 0) cfg.trials = def.default_trials;
  const int workers = std::max(1, cfg.workers);
  const auto start = std::chrono::steady_clock::now();

  const CounterRng root(cfg.seed, std::hash<std::string>{}(name) & 0xffffffffu);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.trials));
  auto run_trial = [&](int t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(cfg.first_trial + t));
    seeds[static_cast<std::size_t>(t)] = rng.key();
    TrialContext ctx{rng, cfg, {}, {}, json::object()};
    TrialOutcome& out = outcomes[static_cast<std::size_t>(t)];
    try {
      def.trial(ctx);
    } catch (const SolverFailure& e) {
      out.error_tag = "solver-failure";
      out.error_what = e.what();
    } catch (const DomainError& e) {
      out.error_tag = "domain-error";
      out.error_what = e.what();
    }
    out.checks = std::move(ctx.checks);
    out.observed = std::move(ctx.observed);
    out.instance = std::move(ctx.instance);
  };
  if (workers == 1) {
    for (int t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int t = w; t < cfg.trials; t += workers) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  SuiteReport rep;
  rep.suite = name;
  rep.trials = cfg.trials;
  rep.tolerance = def.tolerance;
  rep.config = cfg;
  for (int t = 0; t < cfg.trials; ++t) {
    const TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
    const std::uint64_t seed = seeds[static_cast<std::size_t>(t)];
    auto repro = [&]() {
      return json{{"suite", name}, {"trial", cfg.first_trial + t}, {"instance_seed", seed}, {"config", config_json(cfg)},
                  {"instance", o.instance}};
    };
    for (const auto& ch : o.checks) {
      ++rep.checks;
      const double m = std::isfinite(ch.margin) ? ch.margin : 1.0;
      rep.max_violation = std::max(rep.max_violation, m);
      if (m > def.tolerance) rep.failures.push_back({seed, cfg.first_trial + t, ch.quantity, m, "violation", repro()});
    }
    if (!o.error_tag.empty()) {
      // Solver and domain failures count as a unit violation.
      rep.max_violation = std::max(rep.max_violation, 1.0);
      json r = repro();
      r["error"] = o.error_what;
      rep.failures.push_back({seed, cfg.first_trial + t, "exception", 1.0, o.error_tag, r});
    }
    rep.observed.insert(rep.observed.end(), o.observed.begin(), o.observed.end());
  }
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

json to_json(const SuiteReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"instance_seed", f.instance_seed},
                        {"trial", f.trial},
                        {"quantity", f.quantity},
                        {"margin", f.margin},
                        {"tag", f.tag},
                        {"repro", f.repro}});
  }
  return {{"suite", r.suite},
          {"trials", r.trials},
          {"tolerance", r.tolerance},
          {"checks", r.checks},
          {"config", config_json(r.config)},
          {"failures", std::move(failures)},
          {"max_violation", r.max_violation},
          {"passed", r.failures.empty()},
          {"observed", r.observed}};
}

std::string format_table(const SuiteReport& r) {
  std::ostringstream os;
  os << "suite          " << r.suite << "\n"
     << "trials         " << r.trials << "\n"
     << "checks         " << r.checks << "\n"
     << "tolerance      " << std::scientific << std::setprecision(1) << r.tolerance << "\n"
     << "max_violation  " << std::setprecision(3) << r.max_violation << "\n"
     << "result         " << (r.failures.empty() ? "PASS" : "FAIL") << "\n"
     << "elapsed        " << std::fixed << std::setprecision(2) << r.elapsed << "s\n";
  if (!r.failures.empty()) {
    os << "\n" << std::left << std::setw(7) << "trial" << std::setw(28) << "quantity" << std::setw(16) << "tag"
       << "margin\n";
    for (const auto& f : r.failures) {
      os << std::setw(7) << f.trial << std::setw(28) << f.quantity << std::setw(16) << f.tag << std::scientific
         << std::setprecision(3) << f.margin << "\n";
    }
  }
  return os.str();
}

}  // namespace decnorm
