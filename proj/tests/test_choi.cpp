#include <doctest.h>

#include "decnorm/choi.hpp"
#include "decnorm/errors.hpp"
#include "decnorm/verify.hpp"
#include "oracles.hpp"

using namespace decnorm;

namespace {

// Choi block built entry by entry from the defining formula.
CMatrix choi_reference(const std::function<CMatrix(const CMatrix&)>& f, int n, int m) {
  CMatrix c = CMatrix::Zero(n * m, n * m);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      CMatrix e = CMatrix::Zero(n, n);
      e(x, y) = 1.0;
      const CMatrix img = f(e);
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) c(x * m + r, y * m + s) = img(r, s);
    }
  return c;
}

}  // namespace

TEST_CASE("identity and transpose have the textbook Choi matrices") {
  for (int d = 1; d <= 3; ++d) {
    const Algebra a = Algebra::full(d);
    CHECK(max_abs(LinMap::transpose(a).choi(0, 0) - oracle::swap(d)) == 0.0);
    CVector omega = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) omega(i * d + i) = 1.0;
    CHECK(max_abs(LinMap::identity(a).choi(0, 0) - omega * omega.adjoint()) == 0.0);
  }
}

TEST_CASE("from_function matches the reference Choi and apply inverts it") {
  CounterRng rng(1);
  const CMatrix k1 = random_gaussian(rng, 2, 3);
  const CMatrix k2 = random_gaussian(rng, 2, 3);
  auto f = [&](const CMatrix& x) -> CMatrix { return k1 * x.transpose() * k2.adjoint() + x.trace() * CMatrix::Identity(2, 2); };
  const LinMap t = LinMap::from_function(Algebra::full(3), Algebra::full(2), f);
  CHECK(max_abs(t.choi(0, 0) - choi_reference(f, 3, 2)) < 1e-14);
  const CMatrix x = random_gaussian(rng, 3, 3);
  CHECK(max_abs(t.apply(x) - f(x)) < 1e-12);
  const LinMap k = LinMap::from_coefficients(t.source(), t.target(), t.coefficients());
  CHECK(map_distance(k, t) < 1e-14);
}

TEST_CASE("block-diagonal algebras keep off-support entries out") {
  CounterRng rng(2);
  const Algebra a({1, 2});
  const Algebra b({2, 1});
  const LinMap t = random_map(rng, a, b);
  CHECK(t.choi_blocks().size() == 4);
  const CMatrix img = t.apply(a.project(random_gaussian(rng, 3, 3)));
  CHECK(b.respects_support(img));
  CHECK_THROWS_AS(t.apply(CMatrix::Ones(3, 3)), DomainError);
  CHECK_THROWS_AS(LinMap(a, b, {CMatrix::Zero(2, 2)}), DomainError);
}

TEST_CASE("adjoint map, composition and amplification") {
  CounterRng rng(3);
  const Algebra a({1, 2});
  const Algebra b = Algebra::full(2);
  const LinMap t = random_map(rng, a, b);
  const CMatrix x = a.project(random_gaussian(rng, 3, 3));
  CHECK(max_abs(adjoint_map(t).apply(x) - t.apply(x.adjoint()).adjoint()) < 1e-12);
  CHECK(map_distance(adjoint_map(adjoint_map(t)), t) < 1e-14);

  const LinMap s = random_map(rng, b, Algebra::full(3));
  CHECK(max_abs(compose(s, t).apply(x) - s.apply(t.apply(x))) < 1e-12);
  CHECK_THROWS_AS(compose(t, t), DomainError);

  const LinMap t2 = amplify(t, 2);
  CMatrix y = t2.source().zero();
  CHECK(t2.source() == a.amplified(2));
  // [[x, 0], [0, 2x]] in slot ordering maps to [[T x, 0], [0, 2 T x]].
  CMatrix slot = CMatrix::Zero(6, 6);
  slot.block(0, 0, 3, 3) = x;
  slot.block(3, 3, 3, 3) = 2.0 * x;
  y = a.slot_to_block(slot, 2);
  const CMatrix out = b.block_to_slot(t2.apply(y), 2);
  CHECK(max_abs(out.block(0, 0, 2, 2) - t.apply(x)) < 1e-12);
  CHECK(max_abs(out.block(2, 2, 2, 2) - 2.0 * t.apply(x)) < 1e-12);
  CHECK(max_abs(out.block(0, 2, 2, 2)) < 1e-14);
}

TEST_CASE("complete positivity") {
  CounterRng rng(4);
  const Algebra a({1, 2});
  const Algebra b({2});
  const LinMap cp = random_cp_map(rng, a, b);
  CHECK(is_cp(cp));
  CHECK(oracle::min_eig(cp.choi(1, 0)) >= -1e-12);
  CHECK(is_cp(amplify(cp, 2)));
  CHECK_FALSE(is_cp(LinMap::transpose(Algebra::full(2))));
  // Transpose is positive but not 2-positive: the Choi matrix is the swap.
  CHECK(choi_min_eig(LinMap::transpose(Algebra::full(2))) == doctest::Approx(-1.0));
  CHECK(unit_image_norm(cp) == doctest::Approx(oracle::op_norm(cp.apply(a.identity()))));
  const LinMap scaled = cp * cplx(1.0 / unit_image_norm(cp));
  CHECK(is_ccp(scaled));
  CHECK_FALSE(is_ccp(scaled * cplx(1.01)));
}

TEST_CASE("canonical shuffle permutes tensor factors") {
  CounterRng rng(5);
  const CMatrix x = random_gaussian(rng, 2, 2);
  const CMatrix y = random_gaussian(rng, 3, 3);
  const CMatrix z = random_gaussian(rng, 2, 2);
  const CMatrix xyz = kron(kron(x, y), z);
  CHECK(max_abs(canonical_shuffle(xyz, {2, 3, 2}, {1, 0, 2}) - kron(kron(y, x), z)) < 1e-14);
  CHECK(max_abs(canonical_shuffle(xyz, {2, 3, 2}, {2, 1, 0}) - kron(kron(z, y), x)) < 1e-14);
  CHECK(max_abs(canonical_shuffle(xyz, {2, 3, 2}, {0, 1, 2}) - xyz) == 0.0);
}

TEST_CASE("2x2 block maps") {
  CounterRng rng(6);
  const Algebra a({1, 2});
  const Algebra b = Algebra::full(2);
  const LinMap s1 = random_cp_map(rng, a, b);
  const LinMap s2 = random_cp_map(rng, a, b);
  const LinMap t = random_map(rng, a, b);
  const LinMap blk = block2x2(s1, t, s2);
  CHECK(blk.target() == b.amplified(2));
  const CMatrix x = a.project(random_gaussian(rng, 3, 3));
  const CMatrix out = b.block_to_slot(blk.apply(x), 2);
  CHECK(max_abs(out.block(0, 0, 2, 2) - s1.apply(x)) < 1e-12);
  CHECK(max_abs(out.block(0, 2, 2, 2) - t.apply(x)) < 1e-12);
  CHECK(max_abs(out.block(2, 0, 2, 2) - adjoint_map(t).apply(x)) < 1e-12);
  CHECK(max_abs(out.block(2, 2, 2, 2) - s2.apply(x)) < 1e-12);
  const CMatrix arranged = block2x2_arranged_choi(s1, t, s2, 1, 0);
  CHECK(max_abs(arranged.topLeftCorner(4, 4) - s1.choi(1, 0)) == 0.0);
  CHECK(max_abs(arranged.topRightCorner(4, 4) - t.choi(1, 0)) == 0.0);
}
