#include <doctest.h>

#include <fstream>

#include "decnorm/errors.hpp"
#include "decnorm/json_io.hpp"
#include "decnorm/verify.hpp"
#include "oracles.hpp"

using namespace decnorm;

namespace {

json load_fixture(const std::string& name) {
  std::ifstream in(std::string(DECNORM_FIXTURES) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

// S(1) = sum_x C[(x, .), (x, .)] for a Choi matrix over M_n -> M_m.
CMatrix unit_image_from_choi(const CMatrix& c, int n, int m) {
  CMatrix out = CMatrix::Zero(m, m);
  for (int x = 0; x < n; ++x) out += c.block(x * m, x * m, m, m);
  return out;
}

CMatrix stack(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  CMatrix out(a.rows() + c.rows(), a.cols() + b.cols());
  out << a, b, c, d;
  return out;
}

DecOptions no_shortcut() {
  DecOptions o;
  o.cp_shortcut = false;
  return o;
}

}  // namespace

TEST_CASE("hand certificate pins the dec norm of the 2x2 transpose") {
  const json fx = load_fixture("transpose_dec_certificate.json");
  const LinMap t = linmap_from_json(fx.at("map"));
  const CMatrix ct = t.choi(0, 0);

  // Primal: a feasible decomposition with value t.
  const double upper = fx.at("primal").at("t").get<double>();
  const CMatrix c1 = matrix_from_json(fx.at("primal").at("choi_S1"), "S1");
  const CMatrix c2 = matrix_from_json(fx.at("primal").at("choi_S2"), "S2");
  CHECK(oracle::min_eig(stack(c1, ct, ct.adjoint(), c2)) >= -1e-12);
  CHECK(oracle::op_norm(unit_image_from_choi(c1, 2, 2)) <= upper + 1e-12);
  CHECK(oracle::op_norm(unit_image_from_choi(c2, 2, 2)) <= upper + 1e-12);

  // Dual: W >= 0 with normalised rho gives a lower bound.
  const CMatrix r1 = matrix_from_json(fx.at("dual").at("rho1"), "rho1");
  const CMatrix r2 = matrix_from_json(fx.at("dual").at("rho2"), "rho2");
  const CMatrix w12 = matrix_from_json(fx.at("dual").at("W12"), "W12");
  const CMatrix id2 = CMatrix::Identity(2, 2);
  CHECK(oracle::min_eig(stack(kron(id2, r1), w12, w12.adjoint(), kron(id2, r2))) >= -1e-12);
  CHECK(oracle::min_eig(r1) >= 0.0);
  CHECK((r1.trace() + r2.trace()).real() == doctest::Approx(1.0));
  const double lower = -2.0 * (w12.adjoint() * ct).trace().real();
  CHECK(lower == doctest::Approx(fx.at("value").get<double>()));
  CHECK(upper == doctest::Approx(fx.at("value").get<double>()));

  // Only now compare with the solver.
  const DecResult r = dec_norm(t, 1, no_shortcut());
  CHECK(r.value >= lower - 1e-6);
  CHECK(r.value <= upper + 1e-6);
  const DecWitness& w = r.witness;
  CHECK(oracle::min_eig(block2x2_arranged_choi(w.s1, t, w.s2, 0, 0)) >= -1e-7);
  CHECK(unit_image_norm(w.s1) <= r.value + 1e-6);
  CHECK(unit_image_norm(w.s2) <= r.value + 1e-6);
}

TEST_CASE("golden dec values") {
  for (int d = 1; d <= 3; ++d) {
    CHECK(dec_norm(LinMap::identity(Algebra::full(d)), 1, no_shortcut()).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dec_norm(LinMap::transpose(Algebra::full(d)), 1, no_shortcut()).value == doctest::Approx(d).epsilon(1e-6));
  }
  CounterRng rng(1);
  for (int k = 0; k < 5; ++k) {
    const Algebra a = random_algebra(rng, 3);
    const Algebra b = random_algebra(rng, 3);
    const LinMap cp = random_cp_map(rng, a, b);
    const double exact = oracle::op_norm(cp.apply(a.identity()));
    CHECK(dec_norm(cp, 1, no_shortcut()).value == doctest::Approx(exact).epsilon(1e-6));
    const DecResult quick = dec_norm(cp);
    CHECK(quick.value == doctest::Approx(exact).epsilon(1e-12));
    CHECK(quick.solver.status == "cp-shortcut");
  }
}

TEST_CASE("maps between commutative algebras: dec = cb = largest absolute row sum") {
  CounterRng rng(2);
  for (int k = 0; k < 6; ++k) {
    const int n = rng.uniform_int(1, 4);
    const int m = rng.uniform_int(1, 4);
    const CMatrix coef = random_gaussian(rng, n, m);
    const LinMap t = LinMap::from_coefficients(Algebra::diagonal(n), Algebra::diagonal(m), coef);
    const double exact = oracle::commutative_map_norm(coef.transpose());
    CHECK(dec_norm(t, 1, no_shortcut()).value == doctest::Approx(exact).epsilon(1e-6));
    CHECK(cb_norm(t) == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("cb norm of the transpose and the power bound") {
  for (int d = 2; d <= 3; ++d) {
    const CbResult r = cb_norm_report(LinMap::transpose(Algebra::full(d)));
    CHECK(r.value == doctest::Approx(d).epsilon(1e-6));
    CHECK(r.lower_bound <= r.value + 1e-6);
    CHECK(r.lower_bound >= 1.0);
  }
  CounterRng rng(3);
  const LinMap t = random_map(rng, Algebra({1, 2}), Algebra::full(2));
  CHECK(cb_power_lower(t, 4, 200, 7) <= cb_norm(t) + 1e-6);
}

TEST_CASE("dec is amplification invariant and adjoint invariant") {
  CounterRng rng(4);
  const LinMap t = random_map(rng, Algebra::full(2), Algebra({1, 1}));
  const double d1 = dec_norm(t, 1, no_shortcut()).value;
  CHECK(dec_norm(t, 2, no_shortcut()).value == doctest::Approx(d1).epsilon(1e-6));
  CHECK(dec_norm(adjoint_map(t), 1, no_shortcut()).value == doctest::Approx(d1).epsilon(1e-6));
  CHECK(dec_norm(t * cplx(0.0, 3.0), 1, no_shortcut()).value == doctest::Approx(3.0 * d1).epsilon(1e-6));
  CHECK(cb_norm(t) <= d1 + 1e-6);
}

TEST_CASE("decompose returns a certified witness") {
  CounterRng rng(5);
  const LinMap t = random_map(rng, Algebra({1, 2}), Algebra::full(2));
  const DecWitness w = decompose(t);
  const LinMap blk = block2x2(w.s1, t, w.s2);
  CHECK(choi_min_eig(blk) >= -1e-7);
  CHECK(std::max(unit_image_norm(w.s1), unit_image_norm(w.s2)) <= w.value + 1e-6);
  CHECK(w.value == doctest::Approx(dec_norm(t, 1, no_shortcut()).value).epsilon(1e-6));
}

TEST_CASE("zero map and bad levels") {
  const LinMap z = LinMap::zero(Algebra::full(2), Algebra::full(2));
  CHECK(dec_norm(z).value == 0.0);
  CHECK(cb_norm(z) == 0.0);
  CHECK_THROWS_AS(dec_norm(z, 0), DomainError);
}
