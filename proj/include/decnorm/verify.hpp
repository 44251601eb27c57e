#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decnorm/json_io.hpp"
#include "decnorm/random.hpp"

namespace decnorm {

struct SuiteConfig {
  /// Cap on the total matrix side of each leg.
  int dims = 4;
  int max_level = 2;
  /// 0 selects the suite default.
  int trials = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Trials run are first_trial .. first_trial + trials - 1; seeds depend only on the index.
  int first_trial = 0;
};

struct SuiteFailure {
  std::uint64_t instance_seed = 0;
  int trial = 0;
  std::string quantity;
  double margin = 0.0;
  /// "violation", "solver-failure" or "domain-error".
  std::string tag;
  /// Self-contained reproduction: suite, seed, config and the instance.
  json repro;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  double tolerance = 0.0;
  int checks = 0;
  SuiteConfig config;
  std::vector<SuiteFailure> failures;
  /// Largest margin over all checks, floored at 0.
  double max_violation = 0.0;
  /// Wall time in seconds; kept out of the JSON encoding.
  double elapsed = 0.0;
  /// Per-check observed values worth reporting (e.g. the unitary values).
  std::vector<double> observed;
};

const std::vector<std::string>& suite_names();
double suite_tolerance(const std::string& name);
int suite_default_trials(const std::string& name);

/// Throws UsageError for an unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

json to_json(const SuiteReport& r);
std::string format_table(const SuiteReport& r);

/// Gaussian tensor and instance generators shared with the tests.
Algebra random_algebra(CounterRng& rng, int max_side);
LinMap random_map(CounterRng& rng, const Algebra& source, const Algebra& target);
LinMap random_cp_map(CounterRng& rng, const Algebra& source, const Algebra& target);
TensorElement random_tensor(CounterRng& rng, const Space& left, const Space& right, int level);
/// sum_k e_k (x) tr(. u_k)/d on l_inf^n (x) (M_d)* for Haar unitaries u_k.
TensorElement unitary_instance(CounterRng& rng, int n, int d);
/// alpha* z alpha slotwise, alpha of shape level(z) x m.
TensorElement tensor_level_compress(const TensorElement& z, const CMatrix& alpha);

/// Random SDP with a strictly feasible primal X0 > 0 and dual (y0, Z0 > 0):
/// b = A(X0), C = A*(y0) + Z0. Total variable side <= max_side, rows <= max_rows.
SdpProblem random_feasible_sdp(CounterRng& rng, int max_side, int max_rows);

}  // namespace decnorm
