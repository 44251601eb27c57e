#pragma once

#include <cstdint>
#include <limits>

#include "decnorm/linalg.hpp"

namespace decnorm {

/// Counter-based generator: the i-th output is a pure function of
/// (key, i), so independent streams can be derived from one seed without
/// shared state. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0) noexcept;

  /// A generator for sub-stream `index`; the parent is not advanced.
  CounterRng derive(std::uint64_t index) const noexcept;

  result_type operator()() noexcept;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  double uniform() noexcept;          // [0, 1)
  double normal() noexcept;           // standard Gaussian, Box-Muller
  cplx complex_normal() noexcept;     // E|z|^2 = 1
  int uniform_int(int lo, int hi) noexcept;  // inclusive

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

CMatrix random_gaussian(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);
CMatrix random_hermitian(CounterRng& rng, Eigen::Index dim);
/// W W* for Gaussian W of the given rank (rank <= 0 means full).
CMatrix random_psd(CounterRng& rng, Eigen::Index dim, Eigen::Index rank = 0);
/// Haar-distributed unitary via QR of a Gaussian matrix with phase fix.
CMatrix random_unitary(CounterRng& rng, Eigen::Index dim);
/// Isometry dim_in -> dim_out (dim_out >= dim_in).
CMatrix random_isometry(CounterRng& rng, Eigen::Index dim_out, Eigen::Index dim_in);

}  // namespace decnorm
