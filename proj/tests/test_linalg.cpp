#include <doctest.h>

#include <set>

#include "decnorm/errors.hpp"
#include "decnorm/random.hpp"
#include "oracles.hpp"

using namespace decnorm;

TEST_CASE("eigenvalues agree with the Jacobi reference") {
  CounterRng rng(3);
  for (int d = 1; d <= 8; ++d) {
    const CMatrix h = random_hermitian(rng, d);
    const auto e = eig_hermitian(HermitianMatrix(h));
    const auto ref = oracle::eigenvalues(h);
    for (int i = 0; i < d; ++i) CHECK(e.values(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-10));
    CHECK(max_abs(e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint() - h) < 1e-12);
  }
}

TEST_CASE("real embedding doubles the spectrum") {
  CounterRng rng(4);
  const CMatrix h = random_hermitian(rng, 4);
  const Eigen::MatrixXd r = real_embedding(h);
  REQUIRE(r.rows() == 8);
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  const auto ref = oracle::eigenvalues(h);
  for (int i = 0; i < 4; ++i) {
    CHECK(es.eigenvalues()(2 * i) == doctest::Approx(ref[static_cast<std::size_t>(i)]));
    CHECK(es.eigenvalues()(2 * i + 1) == doctest::Approx(ref[static_cast<std::size_t>(i)]));
  }
}

TEST_CASE("norms against the reference") {
  CounterRng rng(5);
  for (int k = 0; k < 5; ++k) {
    const CMatrix m = random_gaussian(rng, 3 + k % 2, 3);
    CHECK(op_norm(m) == doctest::Approx(oracle::op_norm(m)).epsilon(1e-10));
    CHECK(trace_norm(m) == doctest::Approx(oracle::trace_norm(m)).epsilon(1e-10));
    const RVector s = singular_values(m);
    CHECK(s(0) == doctest::Approx(op_norm(m)));
    CHECK(s.sum() == doctest::Approx(trace_norm(m)));
  }
}

TEST_CASE("psd checks, square roots and kron") {
  CounterRng rng(6);
  const CMatrix p = random_psd(rng, 4, 2);
  CHECK(psd_check(HermitianMatrix(p)).is_psd);
  CHECK_FALSE(psd_check(HermitianMatrix(-p - CMatrix::Identity(4, 4))).is_psd);
  const CMatrix r = psd_sqrt(p);
  CHECK(max_abs(r * r - p) < 1e-10);
  CHECK(psd_check(HermitianMatrix(CMatrix::Zero(0, 0))).min_eig == 0.0);

  CMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const CMatrix k = kron(a, CMatrix::Identity(2, 2));
  CHECK(k(0, 2) == cplx(2.0));
  CHECK(k(3, 1) == cplx(3.0));
  CHECK(k(1, 0) == cplx(0.0));
}

TEST_CASE("counter generator is a pure function of key and counter") {
  CounterRng a(42);
  CounterRng b(42);
  for (int i = 0; i < 16; ++i) CHECK(a() == b());
  const CounterRng root(42);
  CounterRng s1 = root.derive(1);
  CounterRng s1b = root.derive(1);
  CounterRng s2 = root.derive(2);
  const auto x = s1();
  CHECK(x == s1b());
  CHECK(x != s2());
  std::set<int> seen;
  CounterRng r(7);
  for (int i = 0; i < 200; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen.insert(r.uniform_int(2, 4));
  }
  CHECK(seen == std::set<int>{2, 3, 4});
}

TEST_CASE("random unitaries and isometries") {
  CounterRng rng(8);
  const CMatrix u = random_unitary(rng, 4);
  CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(4, 4)) < 1e-12);
}
