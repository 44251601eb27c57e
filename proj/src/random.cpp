#include "decnorm/random.hpp"

#include <cmath>
#include <numbers>

namespace decnorm {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t key, std::uint64_t stream) noexcept
    : key_(splitmix64(key ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

CounterRng CounterRng::derive(std::uint64_t index) const noexcept { return CounterRng(key_, index + 1); }

CounterRng::result_type CounterRng::operator()() noexcept {
  return splitmix64(key_ + splitmix64(counter_++));
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

cplx CounterRng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

int CounterRng::uniform_int(int lo, int hi) noexcept {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>((*this)() % span);
}

CMatrix random_gaussian(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

CMatrix random_hermitian(CounterRng& rng, Eigen::Index dim) {
  return hermitian_part(random_gaussian(rng, dim, dim));
}

CMatrix random_psd(CounterRng& rng, Eigen::Index dim, Eigen::Index rank) {
  const Eigen::Index r = rank <= 0 ? dim : rank;
  const CMatrix w = random_gaussian(rng, dim, r);
  return hermitian_part(w * w.adjoint());
}

CMatrix random_isometry(CounterRng& rng, Eigen::Index dim_out, Eigen::Index dim_in) {
  const CMatrix g = random_gaussian(rng, dim_out, dim_in);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim_out, dim_in);
  const CMatrix r = qr.matrixQR().topRows(dim_in).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim_in; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

CMatrix random_unitary(CounterRng& rng, Eigen::Index dim) { return random_isometry(rng, dim, dim); }

}  // namespace decnorm
