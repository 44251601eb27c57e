#include <doctest.h>

#include "decnorm/errors.hpp"
#include "decnorm/json_io.hpp"
#include "decnorm/verify.hpp"
#include "oracles.hpp"

using namespace decnorm;

namespace {

SdpProblem trace_one(const CMatrix& c, SdpSense sense) {
  SdpProblem p;
  const int v = p.add_variable(static_cast<int>(c.rows()));
  p.add_objective_matrix(v, c);
  std::vector<SdpTerm> tr;
  for (int i = 0; i < c.rows(); ++i) tr.push_back({v, i, i, 1.0});
  p.add_constraint(tr, 1.0);
  p.sense = sense;
  return p;
}

}  // namespace

TEST_CASE("extreme eigenvalues as trace-one SDPs") {
  CounterRng rng(1);
  const CMatrix c = random_hermitian(rng, 5);
  const auto ref = oracle::eigenvalues(c);
  const SdpSolution lo = solve(trace_one(c, SdpSense::minimize));
  REQUIRE(lo.status == SdpStatus::optimal);
  CHECK(lo.primal_value == doctest::Approx(ref.front()).epsilon(1e-7));
  const SdpSolution hi = solve(trace_one(c, SdpSense::maximize));
  REQUIRE(hi.status == SdpStatus::optimal);
  CHECK(hi.primal_value == doctest::Approx(ref.back()).epsilon(1e-7));
  // For maximization the dual value bounds the optimum from above.
  CHECK(hi.dual_value >= ref.back() - 1e-7);
  const SdpCertificate cert = check_certificate(trace_one(c, SdpSense::maximize), hi);
  CHECK(cert.primal_feas <= 1e-8);
  CHECK(cert.dual_feas <= 1e-8);
  CHECK(cert.gap <= 1e-8);
}

TEST_CASE("Lovasz theta of the 5-cycle") {
  SdpProblem p;
  const int x = p.add_variable(5);
  p.add_objective_matrix(x, CMatrix::Ones(5, 5));
  std::vector<SdpTerm> tr;
  for (int i = 0; i < 5; ++i) tr.push_back({x, i, i, 1.0});
  p.add_constraint(tr, 1.0);
  for (int i = 0; i < 5; ++i) {
    p.add_constraint(SdpProblem::real_entry(x, i, (i + 1) % 5), 0.0);
    p.add_constraint(SdpProblem::imag_entry(x, i, (i + 1) % 5), 0.0);
  }
  p.sense = SdpSense::maximize;
  const SdpSolution s = solve(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.primal_value == doctest::Approx(oracle::theta_c5()).epsilon(1e-7));
  CHECK(oracle::min_eig(s.variable_values[0]) >= -1e-9);
}

TEST_CASE("infeasible and unbounded problems are classified") {
  SUBCASE("negative trace") {
    SdpProblem p = trace_one(CMatrix::Identity(2, 2), SdpSense::minimize);
    p.constraints[0].rhs = -1.0;
    CHECK(solve(p).status == SdpStatus::infeasible);
  }
  SUBCASE("unbounded below") {
    SdpProblem p;
    const int v = p.add_variable(2);
    p.add_objective(v, 0, 0, -1.0);
    p.add_constraint({{v, 1, 1, 1.0}}, 1.0);
    CHECK(solve(p).status == SdpStatus::unbounded);
  }
}

TEST_CASE("presolve drops zero and duplicate rows") {
  SdpProblem p = trace_one(CMatrix::Identity(3, 3), SdpSense::minimize);
  p.add_constraint(p.constraints[0].terms, 1.0);
  p.add_constraint({}, 0.0);
  const SdpSolution s = solve(p);
  CHECK(s.dropped_rows);
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.multipliers.size() == 3);
  p.add_constraint(p.constraints[0].terms, 2.0);
  CHECK(solve(p).status == SdpStatus::infeasible);
}

TEST_CASE("several variables and cross-variable constraints") {
  // min tr X1 + tr X2 with X1(0,0) + X2(0,0) = 3: optimum 3.
  SdpProblem p;
  const int a = p.add_variable(2);
  const int b = p.add_variable(3);
  p.add_objective_matrix(a, CMatrix::Identity(2, 2));
  p.add_objective_matrix(b, CMatrix::Identity(3, 3));
  p.add_constraint({{a, 0, 0, 1.0}, {b, 0, 0, 1.0}}, 3.0);
  const SdpSolution s = solve(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.primal_value == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("random strictly feasible problems certify") {
  const CounterRng root(99);
  for (int t = 0; t < 25; ++t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(t));
    const SdpProblem p = random_feasible_sdp(rng, 12, 20);
    const SdpSolution s = solve(p);
    REQUIRE(s.status == SdpStatus::optimal);
    const SdpCertificate c = check_certificate(p, s);
    CHECK(c.primal_feas <= 1e-8);
    CHECK(c.dual_feas <= 1e-8);
    CHECK(c.gap <= 1e-8);
  }
}

TEST_CASE("iteration cap and option validation") {
  CounterRng rng(2);
  const SdpProblem p = random_feasible_sdp(rng, 10, 10);
  SdpOptions o;
  o.max_iter = 1;
  CHECK(solve(p, o).status == SdpStatus::max_iter);
  o.gap_tol = 0.0;
  CHECK_THROWS_AS(solve(p, o), DomainError);
}

TEST_CASE("malformed problems are rejected") {
  SdpProblem p;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.add_variable(2);
  p.add_objective(3, 0, 0, 1.0);
  CHECK_THROWS_AS(solve(p), DomainError);
  p.objective = {{0, 2, 0, 1.0}};
  CHECK_THROWS_AS(solve(p), DomainError);
  CHECK_THROWS_AS(SdpProblem::imag_entry(0, 1, 1), DomainError);
}

TEST_CASE("problems round-trip through JSON") {
  CounterRng rng(3);
  SdpProblem p = random_feasible_sdp(rng, 6, 8);
  p.sense = SdpSense::maximize;
  const SdpProblem q = sdp_problem_from_json(json::parse(to_json(p).dump()));
  CHECK(to_json(q) == to_json(p));
  const SdpSolution a = solve(p);
  const SdpSolution b = solve(q);
  CHECK(a.primal_value == b.primal_value);
  CHECK(a.iterations == b.iterations);
  CHECK_THROWS_AS(sdp_problem_from_json(json{{"variables", {2}}}), DomainError);
}
