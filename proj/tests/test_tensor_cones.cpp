#include <doctest.h>

#include "decnorm/errors.hpp"
#include "decnorm/json_io.hpp"
#include "decnorm/verify.hpp"
#include "oracles.hpp"

using namespace decnorm;

namespace {

CVector random_coords(CounterRng& rng, int n) {
  CVector c(n);
  for (int i = 0; i < n; ++i) c(i) = rng.complex_normal();
  return c;
}

TensorElement cone_member(CounterRng& rng, const Algebra& a, const Algebra& b, int n) {
  return tensor_of_map(random_cp_map(rng, a, b.amplified(n)), b, n);
}

}  // namespace

TEST_CASE("tensor bookkeeping") {
  CounterRng rng(1);
  const Space l = Space::primal(Algebra({1, 2}));
  const Space r = Space::dual(Algebra::full(2));
  const TensorElement z = random_tensor(rng, l, r, 2);
  CHECK(z.coeffs().size() == 2u * 2u * 5u * 4u);
  CHECK(z.slot(1, 0)(3, 2) == z(1, 0, 3, 2));
  const TensorElement zz = z.adjoint().adjoint();
  CHECK((zz - z).max_abs_coeff() < 1e-15);
  CHECK((z + z.adjoint()).is_self_adjoint());
  CHECK((z.flip().flip() - z).max_abs_coeff() == 0.0);
  CHECK(z.flip().left() == r);
  CHECK((z * cplx(0.0)).is_zero());
  CHECK_THROWS_AS(TensorElement(l, r, 1, std::vector<cplx>(3)), DomainError);
  CHECK_THROWS_AS(z + random_tensor(rng, l, r, 1), DomainError);
  CHECK(tensor_from_json(json::parse(to_json(z).dump())).coeffs() == z.coeffs());
}

TEST_CASE("associated maps round-trip") {
  CounterRng rng(2);
  const Algebra a({1, 2});
  const Algebra b = Algebra::full(2);
  const TensorElement z = random_tensor(rng, Space::dual(a), Space::primal(b), 2);
  const LinMap psi = associated_map(z);
  CHECK(psi.source() == a);
  CHECK(psi.target() == b.amplified(2));
  const TensorElement back = tensor_of_map(psi, b, 2);
  CHECK((back - z).max_abs_coeff() < 1e-14);
  // Psi(e_p) slot (i,j) has coordinates z(i, j, p, .).
  const CMatrix img = b.block_to_slot(psi.image(3), 2);
  CHECK(b.coords(img.block(2, 0, 2, 2))(1) == z(1, 0, 3, 1));
  CHECK_THROWS_AS(associated_map(random_tensor(rng, Space::primal(a), Space::primal(b), 1)), DomainError);
}

TEST_CASE("identity tensor is the identity map") {
  const Algebra a({1, 2});
  CHECK(map_distance(associated_map(TensorElement::identity(a)), LinMap::identity(a)) == 0.0);
}

TEST_CASE("cross norms on elementary tensors") {
  CounterRng rng(3);
  for (int k = 0; k < 4; ++k) {
    const Algebra a = random_algebra(rng, 3);
    const Algebra b = random_algebra(rng, 3);
    const CVector cv = random_coords(rng, a.dim());
    const CVector cw = random_coords(rng, b.dim());
    const TensorElement z = TensorElement::elementary(Space::primal(a), cv, Space::dual(b), cw);
    const double nv = oracle::op_norm(a.from_coords(cv));
    const double nw = oracle::trace_norm(density_of_coords(b, cw));
    CHECK(inj_norm(z) == doctest::Approx(nv * nw).epsilon(1e-8));
    CHECK(delta_norm(z).value == doctest::Approx(nv * nw).epsilon(1e-6));
    const DeltaBracket d = Delta_norm(z);
    CHECK(d.value_lower == doctest::Approx(nv * nw).epsilon(1e-6));
    CHECK(d.value_upper == doctest::Approx(nv * nw).epsilon(1e-6));
  }
}

TEST_CASE("delta = inj on the positive cone and the sampled bound stays below") {
  CounterRng rng(4);
  DecOptions opts;
  opts.cp_shortcut = false;
  for (int k = 0; k < 4; ++k) {
    const TensorElement z = cone_member(rng, random_algebra(rng, 3), random_algebra(rng, 2), 1 + k % 2);
    CHECK(cone_member_delta(z));
    const double d = delta_norm(z, opts).value;
    CHECK(d == doctest::Approx(inj_norm(z)).epsilon(1e-6));
    CHECK(d == doctest::Approx(oracle::op_norm(associated_map(z).apply(associated_map(z).source().identity()))).epsilon(1e-6));
    CHECK(delta_sampled_lower(z, 128, 11) <= d + 1e-9);
  }
}

TEST_CASE("delta <= Delta and the bracket closes at level one") {
  CounterRng rng(5);
  for (int k = 0; k < 4; ++k) {
    const TensorElement z =
        random_tensor(rng, Space::primal(random_algebra(rng, 3)), Space::dual(random_algebra(rng, 3)), 1);
    const double d = delta_norm(z).value;
    const DeltaBracket b = Delta_norm(z);
    CHECK(d <= b.value_upper + 1e-6);
    CHECK(b.value_lower <= b.value_upper + 1e-6);
    CHECK(b.value_upper - b.value_lower <= 1e-6 * std::max(1.0, b.value_upper));
    CHECK(inj_norm(z) <= d + 1e-6);
  }
}

TEST_CASE("unitary instances have Delta norm one") {
  CounterRng rng(6);
  for (int n = 2; n <= 3; ++n)
    for (int d = 2; d <= 3; ++d) {
      const DeltaBracket b = Delta_norm(unitary_instance(rng, n, d));
      CHECK(b.value_lower == doctest::Approx(1.0).epsilon(1e-4));
      CHECK(b.value_upper == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("the two pairing SDPs agree on l_inf^2 (x) M_d*") {
  CounterRng rng(7);
  const TensorElement z = random_tensor(rng, Space::primal(Algebra::diagonal(2)), Space::dual(Algebra::full(2)), 1);
  const ProjectiveCrossCheck x = cross_check_projective(z);
  CHECK(x.delta_ball_value == doctest::Approx(x.cb_ball_value).epsilon(1e-5));
  const PairingResult p = dec_ball_pairing(z);
  CHECK(p.value_lower == doctest::Approx(x.delta_ball_value).epsilon(1e-5));
  CHECK(dec_norm(p.maximizer).value <= 1.0 + 1e-6);
}

TEST_CASE("delta-cone membership") {
  CounterRng rng(8);
  const Algebra a = Algebra::full(2);
  CHECK(cone_member_delta(TensorElement::identity(a)));
  CHECK_FALSE(cone_member_delta(tensor_of_map(LinMap::transpose(a), a, 1)));
  const TensorElement z1 = cone_member(rng, a, Algebra({1, 1}), 2);
  const TensorElement z2 = cone_member(rng, a, Algebra({1, 1}), 2);
  CHECK(cone_member_delta(z1 + z2));
  CMatrix alpha = random_gaussian(rng, 2, 3);
  CHECK(cone_member_delta(tensor_level_compress(z1, alpha)));
  CHECK_FALSE(cone_member_delta(z1 * cplx(-1.0)));
}

TEST_CASE("Delta-cone factorizations") {
  CounterRng rng(9);
  SUBCASE("identity factors through M_d") {
    const Algebra a = Algebra::full(3);
    const DeltaConeResult r = cone_member_Delta(TensorElement::identity(a), 1e-6, 9);
    REQUIRE(r.member);
    REQUIRE(r.witness);
    CHECK(r.witness->k <= 9);
    CHECK(map_distance(factorization_map(*r.witness), LinMap::identity(a)) < 1e-9);
    CHECK(is_cp(r.witness->r));
    CHECK(level_positive(r.witness->w));
  }
  SUBCASE("random cp tensors") {
    for (int k = 0; k < 4; ++k) {
      const TensorElement z = cone_member(rng, random_algebra(rng, 3), random_algebra(rng, 3), 1 + k % 2);
      const LinMap psi = associated_map(z);
      const DeltaConeResult r = cone_member_Delta(z);
      REQUIRE(r.witness);
      CHECK(r.witness->k <= psi.source().dim() * psi.target().dim());
      CHECK(map_distance(factorization_map(*r.witness), psi) < 1e-6);
    }
  }
  SUBCASE("transpose is not a member") {
    const DeltaConeResult r = cone_member_Delta(tensor_of_map(LinMap::transpose(Algebra::full(2)), Algebra::full(2), 1));
    CHECK_FALSE(r.member);
    CHECK_FALSE(r.witness);
  }
}

TEST_CASE("every tensor is a corner of a Delta-cone element") {
  CounterRng rng(10);
  for (int n = 1; n <= 2; ++n) {
    const TensorElement z =
        random_tensor(rng, Space::dual(Algebra::full(2)), Space::primal(Algebra({1, 1})), n);
    const NonemptyWitness w = nonempty_witness(z);
    const TensorElement blk = tensor_block(w.u1, z, z.adjoint(), w.u2);
    CHECK((blk - w.block).max_abs_coeff() < 1e-10);
    CHECK(cone_member_delta(w.block, 1e-7));
    CHECK(cone_member_delta(w.u1, 1e-7));
    CHECK(cone_member_delta(w.u2, 1e-7));
    CHECK(level_positive(w.v_block, 1e-7));
    CHECK(level_positive(w.w_block, 1e-7));
  }
}

TEST_CASE("functoriality for a cp map on the left leg") {
  CounterRng rng(11);
  const Algebra a1({1, 2});
  const Algebra a2 = Algebra::full(2);
  const LinMap phi = random_cp_map(rng, a1, a2);
  const TensorElement z = random_tensor(rng, Space::primal(a1), Space::dual(Algebra::full(2)), 1);
  const TensorElement fz = apply_left(phi, z);
  CHECK(fz.left() == Space::primal(a2));
  CHECK(delta_norm(fz).value <= unit_image_norm(phi) * delta_norm(z).value + 1e-6);
  CHECK_THROWS_AS(apply_left(phi, z.flip()), DomainError);
}
