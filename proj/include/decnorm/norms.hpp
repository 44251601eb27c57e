#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "decnorm/choi.hpp"
#include "decnorm/sdp.hpp"
#include "decnorm/tensor.hpp"

namespace decnorm {

struct SolverInfo {
  int iterations = 0;
  double gap = 0.0;
  std::string status = "none";
};

// ---------------------------------------------------------------- dec / cb

struct DecWitness {
  LinMap s1;
  LinMap s2;
  double value = 0.0;
};

struct DecOptions {
  SdpOptions sdp;
  /// Return ||T(1)|| with S1 = S2 = T for cp T instead of solving the SDP.
  bool cp_shortcut = true;
};

struct DecResult {
  double value = 0.0;
  DecWitness witness;
  SolverInfo solver;
};

/// ||T_n||_dec, computed on amplify(t, level).
DecResult dec_norm(const LinMap& t, int level = 1, const DecOptions& opts = {});
DecWitness decompose(const LinMap& t, const DecOptions& opts = {});

struct CbOptions {
  SdpOptions sdp;
  bool power_bound = true;
  int restarts = 4;
  int power_iters = 200;
  std::uint64_t seed = 0x5eed;
};

struct CbResult {
  double value = 0.0;
  /// Power-iteration lower bound on T_d, d = source side; 0 when disabled.
  double lower_bound = 0.0;
  SolverInfo solver;
};

CbResult cb_norm_report(const LinMap& t, const CbOptions& opts = {});
double cb_norm(const LinMap& t);

/// Power-iteration estimate of ||T_d|| over the unit ball of M_d(source).
double cb_power_lower(const LinMap& t, int restarts, int iters, std::uint64_t seed);

// ---------------------------------------------------------------- tensors

/// cb_norm(associated_map(z)); accepts either mixed shape.
double inj_norm(const TensorElement& z);
/// dec_norm(associated_map(z)); accepts either mixed shape.
DecResult delta_norm(const TensorElement& z, const DecOptions& opts = {});

/// Supremum of ||(phi (x) psi)_n(z)|| over seeded random c.c.p. pairs.
double delta_sampled_lower(const TensorElement& z, int samples = 256, std::uint64_t seed = 0x5eed);

struct DeltaOptions {
  SdpOptions sdp;
  int max_alternations = 12;
  int restarts = 2;
  double alternation_tol = 1e-7;
  std::uint64_t seed = 0x5eed;
  /// Skip the completion SDP in the upper bound and use only the rank bound.
  bool cheap_upper = false;
};

struct DeltaBracket {
  double value_lower = 0.0;
  double value_upper = 0.0;
  /// Alternation hit max_alternations without settling.
  bool warning = false;
  SolverInfo solver;
};

/// Delta-norm of z in M_n(A (x) B*); a dual-left element is flipped first.
DeltaBracket Delta_norm(const TensorElement& z, const DeltaOptions& opts = {});

struct DeltaUpper {
  double value = 0.0;
  /// Central completion u = 1 (x) w, u' = 1 (x) w' certified by an SDP.
  double completion_value = 0.0;
  bool completion_solved = false;
  /// Rank decomposition plus subcross and subadditivity.
  double rank_value = 0.0;
};

DeltaUpper Delta_primal_upper_report(const TensorElement& z, const SdpOptions& opts = {}, bool use_completion = true);
double Delta_primal_upper(const TensorElement& z);

/// Maximize Re <T, z> over ||T||_dec <= 1, z in A (x) B* at level 1.
struct PairingResult {
  double value_lower = 0.0;
  double value_upper = 0.0;
  LinMap maximizer;
  SolverInfo solver;
};
PairingResult dec_ball_pairing(const TensorElement& z, const SdpOptions& opts = {});

struct ProjectiveCrossCheck {
  double delta_ball_value = 0.0;
  double cb_ball_value = 0.0;
};
/// Two independent SDPs for the sup of the pairing: over the dec ball and
/// over the cb ball in its averaged form (||S1(1)|| + ||S2(1)|| <= 2).
ProjectiveCrossCheck cross_check_projective(const TensorElement& z, const SdpOptions& opts = {});

// ---------------------------------------------------------------- cones

bool cone_member_delta(const TensorElement& z, double tolerance = tol::kPsd);

struct FactorizationWitness {
  LinMap r;
  LevelElement w;
  CMatrix alpha;
  int k = 0;
  int l = 0;
};

struct DeltaConeResult {
  bool member = false;
  /// The search ran out of k without a witness; not a proof of non-membership.
  bool k_max_limited = false;
  std::optional<FactorizationWitness> witness;
};

/// Searches S o R factorizations of Psi_n(z) through M_k, k <= k_max.
/// k_max <= 0 selects dim(source) * dim(target).
DeltaConeResult cone_member_Delta(const TensorElement& z, double tolerance = 1e-6, int k_max = 0);

/// S o R with S(x) = alpha (x (x) w) alpha*, as a map into w's space.
LinMap factorization_map(const FactorizationWitness& f);

struct NonemptyWitness {
  TensorElement u1;
  TensorElement u2;
  /// [[u1, z], [z*, u2]] = gamma (vb (x) wb) gamma*.
  TensorElement block;
  LevelElement v_block;
  LevelElement w_block;
  CMatrix gamma;
};

NonemptyWitness nonempty_witness(const TensorElement& z);

}  // namespace decnorm
