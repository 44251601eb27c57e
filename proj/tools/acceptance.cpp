// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Tolerances, trial counts and time budgets are fixed here on purpose; change
// them only together with the README.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "decnorm/errors.hpp"
#include "decnorm/verify.hpp"

using namespace decnorm;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Line {
  int id;
  bool pass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CounterRng stream(int criterion) { return CounterRng(kSeed, static_cast<std::uint64_t>(criterion)); }

// Criterion 1: Delta of sum_k e_k (x) tr(. u_k)/d is 1 for unitaries u_k.
Line unitary() {
  constexpr int kTrials = 25;
  constexpr double kTol = 1e-4;
  constexpr double kBudget = 60.0;
  const CounterRng root = stream(1);
  Stopwatch sw;
  double dev = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(t));
    const int n = rng.uniform_int(2, 4);
    const int d = rng.uniform_int(2, 4);
    const DeltaBracket b = Delta_norm(unitary_instance(rng, n, d));
    dev = std::max({dev, std::abs(b.value_lower - 1.0), std::abs(b.value_upper - 1.0)});
  }
  const double s = sw.seconds();
  return {1, dev <= kTol && s <= kBudget,
          fmt("unitary Delta bracket within 1 +- 1e-4 over 25 instances: max deviation %.2e, %.1fs (budget 60s)", dev, s)};
}

// Criterion 2: on delta-cone members delta = inj and the sampled lower bound stays below.
Line positive() {
  constexpr int kTrials = 50;
  constexpr double kTol = 1e-4;
  constexpr double kSampledSlack = 1e-6;
  constexpr double kBudget = 120.0;
  const CounterRng root = stream(2);
  Stopwatch sw;
  double dev = 0.0;
  double over = -1.0;
  DecOptions opts;
  opts.cp_shortcut = false;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(t));
    const Algebra a = random_algebra(rng, 3);
    const Algebra b = random_algebra(rng, 3);
    const int n = rng.uniform_int(1, 2);
    const TensorElement z = tensor_of_map(random_cp_map(rng, a, b.amplified(n)), b, n);
    const double d = delta_norm(z, opts).value;
    dev = std::max(dev, std::abs(d - inj_norm(z)));
    over = std::max(over, delta_sampled_lower(z, 256, rng()) - d);
  }
  const double s = sw.seconds();
  return {2, dev <= kTol && over <= kSampledSlack && s <= kBudget,
          fmt("positive tensors: max |delta - inj| %.2e (tol 1e-4), max sampled - delta %.2e (tol 1e-6), %.1fs", dev, over,
              s)};
}

// Criterion 3: over (l_inf^n)* (x) M_d the delta norm is the dec norm of the associated map, and dec = cb.
Line duality_isometry() {
  constexpr int kTrials = 50;
  constexpr double kTol = 1e-4;
  const CounterRng root = stream(3);
  double iso = 0.0;
  double coincide = 0.0;
  DecOptions opts;
  opts.cp_shortcut = false;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(t));
    const int n = rng.uniform_int(1, 3);
    const int d = rng.uniform_int(1, 3);
    const TensorElement z = random_tensor(rng, Space::dual(Algebra::diagonal(n)), Space::primal(Algebra::full(d)), 1);
    const LinMap psi = associated_map(z);
    const double dz = delta_norm(z, opts).value;
    const double dec = dec_norm(psi, 1, opts).value;
    iso = std::max(iso, std::abs(dz - dec));
    coincide = std::max(coincide, std::abs(dec - cb_norm(psi)) / std::max(1.0, dec));
  }
  return {3, iso <= kTol && coincide <= kTol,
          fmt("(l_inf^n)* (x) M_d: max |delta - dec| %.2e, max |dec - cb| %.2e (tol 1e-4)", iso, coincide)};
}

// Criterion 4: delta <= Delta and subcross, 200 trials in total.
Line order() {
  constexpr double kTol = 1e-6;
  SuiteConfig cfg;
  cfg.dims = 3;
  cfg.trials = 100;
  cfg.seed = kSeed;
  const SuiteReport a = run_suite("delta-le-Delta", cfg);
  const SuiteReport b = run_suite("subcross", cfg);
  const double worst = std::max(a.max_violation, b.max_violation);
  const std::size_t fails = a.failures.size() + b.failures.size();
  return {4, worst <= kTol && fails == 0,
          fmt("delta <= Delta and subcross over 200 trials: %.0f failures, max violation %.2e (tol 1e-6)",
              static_cast<double>(fails), worst)};
}

// Criterion 5: golden dec values.
Line golden() {
  DecOptions sdp;
  sdp.cp_shortcut = false;
  const double id = dec_norm(LinMap::identity(Algebra::full(3)), 1, sdp).value;
  const double tr = dec_norm(LinMap::transpose(Algebra::full(2)), 1, sdp).value;
  CounterRng rng = stream(5);
  double cp_dev = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Algebra a = random_algebra(rng, 3);
    const Algebra b = random_algebra(rng, 3);
    const LinMap m = random_cp_map(rng, a, b);
    const double exact = op_norm(m.apply(a.identity()));
    cp_dev = std::max(cp_dev, std::abs(dec_norm(m, 1, sdp).value - exact));
  }
  const bool pass = std::abs(id - 1.0) <= 1e-6 && std::abs(tr - 2.0) <= 1e-4 && cp_dev <= 1e-6;
  return {5, pass,
          fmt("golden dec values: identity %.9f (1 +- 1e-6), transpose M_2 %.7f (2 +- 1e-4), cp max dev %.2e (1e-6)", id,
              tr, cp_dev)};
}

// Criterion 6: Delta-cone factorizations of cp-map tensors.
Line factorization() {
  constexpr int kTrials = 25;
  constexpr double kTol = 1e-6;
  const CounterRng root = stream(6);
  int found = 0;
  double worst = 0.0;
  bool k_ok = true;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(t));
    const Algebra a = random_algebra(rng, 3);
    const Algebra b = random_algebra(rng, 3);
    const int n = rng.uniform_int(1, 2);
    const TensorElement z = tensor_of_map(random_cp_map(rng, a, b.amplified(n)), b, n);
    const LinMap psi = associated_map(z);
    const int k_max = psi.source().dim() * psi.target().dim();
    const DeltaConeResult r = cone_member_Delta(z, kTol, k_max);
    if (!r.witness) continue;
    ++found;
    k_ok = k_ok && r.witness->k <= k_max;
    worst = std::max(worst, map_distance(factorization_map(*r.witness), psi));
  }
  return {6, found == kTrials && k_ok && worst <= kTol,
          fmt("factorization witnesses %.0f/25, max reassembly error %.2e (tol 1e-6), k <= dim(source)*dim(target): ",
              static_cast<double>(found), worst) +
              (k_ok ? "yes" : "no")};
}

// Criterion 7: functoriality, 100 trials over cp and decomposable maps.
Line functorial() {
  constexpr double kTol = 1e-6;
  SuiteConfig cfg;
  cfg.dims = 3;
  cfg.trials = 50;
  cfg.seed = kSeed;
  const SuiteReport a = run_suite("functorial-cp", cfg);
  const SuiteReport b = run_suite("functorial-dec", cfg);
  const double worst = std::max(a.max_violation, b.max_violation);
  const std::size_t fails = a.failures.size() + b.failures.size();
  return {7, worst <= kTol && fails == 0,
          fmt("functoriality over 100 trials: %.0f failures, max violation %.2e (tol 1e-6)", static_cast<double>(fails),
              worst)};
}

// Criterion 8: solver health on random strictly feasible SDPs.
Line solver_health() {
  constexpr int kTrials = 500;
  constexpr double kGap = 1e-7;
  constexpr double kCert = 1e-8;
  constexpr double kRate = 0.99;
  const CounterRng root = stream(8);
  SdpOptions opts;
  opts.max_iter = 100;
  int converged = 0;
  double worst_cert = 0.0;
  Stopwatch sw;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(t));
    const SdpProblem p = random_feasible_sdp(rng, 30, 60);
    SdpSolution s;
    try {
      s = solve(p, opts);
    } catch (const SolverFailure&) {
      continue;
    }
    if (s.status != SdpStatus::optimal) continue;
    const SdpCertificate c = check_certificate(p, s);
    if (c.gap <= kGap) ++converged;
    worst_cert = std::max({worst_cert, c.primal_feas, c.dual_feas, c.gap});
  }
  const double rate = static_cast<double>(converged) / kTrials;
  return {8, rate >= kRate && worst_cert <= kCert,
          fmt("random SDPs: %.1f%% reach gap <= 1e-7 (need 99%%), worst certificate residual %.2e (tol 1e-8), %.1fs",
              100.0 * rate, worst_cert, sw.seconds())};
}

}  // namespace

int main() {
  const std::vector<std::function<Line()>> criteria = {unitary,        positive,   duality_isometry, order,
                                                        golden,         factorization, functorial,    solver_health};
  bool all = true;
  for (const auto& c : criteria) {
    Line l;
    try {
      l = c();
    } catch (const std::exception& e) {
      l = {static_cast<int>(&c - criteria.data()) + 1, false, std::string("exception: ") + e.what()};
    }
    all = all && l.pass;
    std::printf("criterion %d %s  %s\n", l.id, l.pass ? "PASS" : "FAIL", l.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
