#include <doctest.h>

#include "decnorm/errors.hpp"
#include "decnorm/verify.hpp"

using namespace decnorm;

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 14);
  for (const auto& s : suite_names()) {
    CHECK(suite_tolerance(s) > 0.0);
    CHECK(suite_default_trials(s) > 0);
  }
  CHECK_THROWS_AS(run_suite("no-such-suite", {}), UsageError);
  SuiteConfig bad;
  bad.dims = 0;
  CHECK_THROWS_AS(run_suite("unitary", bad), UsageError);
}

TEST_CASE("every suite passes a short seeded run") {
  SuiteConfig cfg;
  cfg.trials = 3;
  cfg.seed = 5;
  for (const auto& s : suite_names()) {
    CAPTURE(s);
    const SuiteReport r = run_suite(s, cfg);
    CHECK(r.trials == 3);
    CHECK(r.checks > 0);
    CHECK(r.failures.empty());
    CHECK(r.max_violation <= r.tolerance);
  }
}

TEST_CASE("reports are deterministic across runs, worker counts and trial slices") {
  SuiteConfig cfg;
  cfg.trials = 4;
  cfg.seed = 17;
  const json a = to_json(run_suite("duality2", cfg));
  const json b = to_json(run_suite("duality2", cfg));
  CHECK(a == b);
  cfg.workers = 3;
  CHECK(to_json(run_suite("duality2", cfg)) == a);

  // Trial 2 alone reproduces trial 2 of the full run.
  SuiteConfig one = cfg;
  one.workers = 1;
  one.trials = 1;
  one.first_trial = 2;
  const SuiteReport single = run_suite("unitary", one);
  cfg.workers = 1;
  const SuiteReport full = run_suite("unitary", cfg);
  REQUIRE(single.observed.size() == 2);
  CHECK(single.observed[0] == full.observed[4]);
  CHECK(single.observed[1] == full.observed[5]);

  cfg.seed = 18;
  CHECK(to_json(run_suite("duality2", cfg)) != a);
}

TEST_CASE("report layout and table") {
  SuiteConfig cfg;
  cfg.trials = 2;
  const SuiteReport r = run_suite("regularity", cfg);
  const json j = to_json(r);
  for (const char* k : {"suite", "trials", "tolerance", "checks", "config", "failures", "max_violation", "passed"})
    CHECK(j.contains(k));
  CHECK_FALSE(j.contains("elapsed"));
  const std::string t = format_table(r);
  CHECK(t.find("regularity") != std::string::npos);
  CHECK(t.find("PASS") != std::string::npos);
}

TEST_CASE("generators respect their bounds") {
  CounterRng rng(1);
  for (int k = 0; k < 20; ++k) {
    const Algebra a = random_algebra(rng, 3);
    CHECK(a.side() >= 1);
    CHECK(a.side() <= 3);
    const SdpProblem p = random_feasible_sdp(rng, 30, 60);
    int side = 0;
    for (int d : p.dims) side += d;
    CHECK(side <= 30);
    CHECK(p.constraints.size() <= 60u);
  }
  const TensorElement z = unitary_instance(rng, 3, 2);
  CHECK(z.left() == Space::primal(Algebra::diagonal(3)));
  CHECK(z.right() == Space::dual(Algebra::full(2)));
  CHECK_THROWS_AS(tensor_level_compress(z, CMatrix::Identity(2, 2)), DomainError);
}
