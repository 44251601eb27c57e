#pragma once

// SDP building blocks shared by the decomposable-norm programs.

#include <vector>

#include "decnorm/choi.hpp"
#include "decnorm/sdp.hpp"

namespace decnorm::detail {

/// Q_bc = [[C_S1, X], [X*, C_S2]] per (source block, target block), plus
/// slacks Y1_c, Y2_c closing S1(1) and S2(1) against a bound.
struct DecLayout {
  Algebra source;
  Algebra target;
  std::vector<int> q;   // b * target.num_blocks() + c
  std::vector<int> y1;  // per target block
  std::vector<int> y2;
  int q_var(int b, int c) const { return q[static_cast<std::size_t>(b * target.num_blocks() + c)]; }
  int half(int b, int c) const { return source.block_size(b) * target.block_size(c); }
};

DecLayout add_dec_variables(SdpProblem& p, const Algebra& source, const Algebra& target);

/// S_side(1)_c + Y_c - bound * I = rhs_scale * I, bound_var < 0 meaning no
/// scalar term. side 0 reads the top-left blocks, side 1 the bottom-right.
void add_unit_bound(SdpProblem& p, const DecLayout& l, int side, int bound_var, double rhs_scale);

/// Fixes the top-right block of every Q_bc to the Choi block of t.
void fix_off_diagonal(SdpProblem& p, const DecLayout& l, const LinMap& t);

/// Reads S1, S2 (side 0, 1) or the off-diagonal map (side 2) from a solution.
LinMap extract_map(const DecLayout& l, const SdpSolution& s, int side);

/// Adds Re <T, z> with T the off-diagonal block, z coefficients K[p][q]
/// over source x target bases (z[(b,x,y)][(c,r,s)]).
void add_pairing_objective(SdpProblem& p, const DecLayout& l, const CMatrix& z);

}  // namespace decnorm::detail
