#include <doctest.h>

#include "decnorm/choi.hpp"
#include "decnorm/errors.hpp"
#include "decnorm/norms.hpp"
#include "decnorm/random.hpp"
#include "oracles.hpp"

using namespace decnorm;

TEST_CASE("basis bookkeeping of M_1 (+) M_2") {
  const Algebra a({1, 2});
  CHECK(a.side() == 3);
  CHECK(a.dim() == 5);
  CHECK(a.basis_offset(1) == 1);
  for (int p = 0; p < a.dim(); ++p) {
    const auto u = a.unit_of(p);
    CHECK(a.index_of(u.block, u.row, u.col) == p);
  }
  const CMatrix e = a.unit(a.index_of(1, 0, 1));
  CHECK(e(1, 2) == cplx(1.0));
  CHECK(e.cwiseAbs().sum() == 1.0);

  CounterRng rng(1);
  CVector c(5);
  for (int i = 0; i < 5; ++i) c(i) = rng.complex_normal();
  const CMatrix m = a.from_coords(c);
  CHECK(a.respects_support(m));
  CHECK((a.coords(m) - c).norm() == 0.0);
  CMatrix bad = m;
  bad(0, 2) = 1.0;
  CHECK_FALSE(a.respects_support(bad));
  CHECK(a.respects_support(a.project(bad)));
  CHECK_THROWS_AS(Algebra({2, 0}), DomainError);
}

TEST_CASE("amplification orders slots inside blocks") {
  const Algebra a({1, 2});
  const Algebra a2 = a.amplified(2);
  CHECK(a2.blocks() == std::vector<int>{2, 4});
  CounterRng rng(2);
  CMatrix x = a2.zero();
  x.block(0, 0, 2, 2) = random_gaussian(rng, 2, 2);
  x.block(2, 2, 4, 4) = random_gaussian(rng, 4, 4);
  const CMatrix slot = a.block_to_slot(x, 2);
  CHECK(max_abs(a.slot_to_block(slot, 2) - x) == 0.0);
  // Slot (1,0) of the M_1 summand sits in block 0 at (1,0).
  CHECK(slot(3, 0) == x(1, 0));
}

TEST_CASE("level elements: unit, adjoint and coordinates") {
  const Algebra a = Algebra::full(2);
  const LevelElement one = LevelElement::unit(Space::primal(a), 2);
  CHECK(max_abs(one.matrix() - CMatrix::Identity(4, 4)) == 0.0);
  CHECK(level_norm(one) == doctest::Approx(1.0));
  CHECK(level_positive(one));

  CounterRng rng(3);
  CVector c(16);
  for (int i = 0; i < 16; ++i) c(i) = rng.complex_normal();
  const LevelElement x = LevelElement::from_coords(Space::primal(a), 2, c);
  CHECK((x.coords() - c).norm() < 1e-14);
  CHECK((x.adjoint().adjoint().matrix() - x.matrix()).norm() == 0.0);
  CHECK((x + x.adjoint()).is_self_adjoint());
  CHECK(level_norm(x) == doctest::Approx(oracle::op_norm(x.matrix())));
  CHECK_THROWS_AS(LevelElement(Space::primal(a), 2, CMatrix::Zero(3, 3)), DomainError);
}

TEST_CASE("dual elements: trace functionals have cb norm d") {
  for (int d = 1; d <= 3; ++d) {
    const LevelElement tr = LevelElement::unit(Space::dual(Algebra::full(d)), 1);
    CHECK(level_norm(tr) == doctest::Approx(d).epsilon(1e-6));
    CHECK(level_positive(tr));
    const LinMap m = tr.as_map();
    CHECK(m.target() == Algebra::full(1));
    CHECK(max_abs(LevelElement::from_map(m).matrix() - tr.matrix()) < 1e-14);
  }
}

TEST_CASE("dual norm of a level-1 functional is the trace norm of its density") {
  CounterRng rng(4);
  const Algebra a({1, 2});
  CVector c(5);
  for (int i = 0; i < 5; ++i) c(i) = rng.complex_normal();
  const LevelElement f = LevelElement::from_coords(Space::dual(a), 1, c);
  CHECK(level_norm(f) == doctest::Approx(oracle::trace_norm(f.matrix())).epsilon(1e-6));
}

TEST_CASE("compression by alpha") {
  CounterRng rng(5);
  const Algebra a = Algebra::full(2);
  const LevelElement one = LevelElement::unit(Space::primal(a), 2);
  CMatrix alpha(2, 1);
  alpha << 1.0, 1.0;
  const LevelElement c = compress(one, alpha);
  CHECK(c.level() == 1);
  CHECK(max_abs(c.matrix() - 2.0 * CMatrix::Identity(2, 2)) < 1e-14);
  CHECK_THROWS_AS(compress(one, CMatrix::Zero(3, 1)), DomainError);
}

TEST_CASE("regularity witnesses") {
  CounterRng rng(6);
  SUBCASE("primal") {
    const Algebra a({1, 2});
    CMatrix m = a.project(random_gaussian(rng, 3, 3));
    LevelElement x(Space::primal(a), 1, m);
    x = x * cplx(0.8 / level_norm(x));
    const RegularityWitness w = regularity_witness(x);
    CHECK(oracle::min_eig(w.block.matrix()) >= -1e-12);
    CHECK(oracle::min_eig(w.a.matrix()) >= -1e-12);
    CHECK(level_norm(w.a) < 1.0);
    CHECK(level_norm(w.d) < 1.0);
  }
  SUBCASE("zero gives half the unit") {
    const LevelElement z = LevelElement::zero(Space::primal(Algebra::full(2)), 2);
    const RegularityWitness w = regularity_witness(z);
    CHECK(max_abs(w.a.matrix() - 0.5 * CMatrix::Identity(4, 4)) < 1e-14);
  }
  SUBCASE("dual") {
    const Algebra a = Algebra::full(2);
    CVector c(4);
    for (int i = 0; i < 4; ++i) c(i) = rng.complex_normal();
    LevelElement f = LevelElement::from_coords(Space::dual(a), 1, c);
    f = f * cplx(0.7 / level_norm(f));
    const RegularityWitness w = regularity_witness(f);
    CHECK(level_positive(w.block, 1e-7));
    CHECK(level_norm(w.a) < 1.0);
    CHECK(level_norm(w.d) < 1.0);
  }
  SUBCASE("norm at least one is rejected") {
    const LevelElement one = LevelElement::unit(Space::primal(Algebra::full(2)), 1);
    CHECK_THROWS_AS(regularity_witness(one), DomainError);
  }
}
