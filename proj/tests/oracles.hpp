#pragma once

// Reference computations that share no code with the library: a cyclic Jacobi
// eigensolver on the real embedding, and closed forms for small cases.

#include <algorithm>
#include <cmath>
#include <vector>

#include "decnorm/linalg.hpp"

namespace oracle {

using decnorm::CMatrix;
using decnorm::cplx;

/// Eigenvalues (ascending) of a Hermitian matrix. Each complex entry a+bi
/// becomes [[a,-b],[b,a]]; the 2d x 2d symmetric result has every eigenvalue
/// twice, and sorted pairs are averaged back down to d values.
inline std::vector<double> eigenvalues(const CMatrix& h) {
  const int d = static_cast<int>(h.rows());
  const int n = 2 * d;
  std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      at(2 * i, 2 * j) = v.real();
      at(2 * i, 2 * j + 1) = -v.imag();
      at(2 * i + 1, 2 * j) = v.imag();
      at(2 * i + 1, 2 * j + 1) = v.real();
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(all.begin(), all.end());
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    out[static_cast<std::size_t>(i)] = 0.5 * (all[static_cast<std::size_t>(2 * i)] + all[static_cast<std::size_t>(2 * i + 1)]);
  return out;
}

inline double min_eig(const CMatrix& h) { return eigenvalues(h).front(); }
inline double max_eig(const CMatrix& h) { return eigenvalues(h).back(); }

inline double op_norm(const CMatrix& m) {
  const CMatrix g = m.adjoint() * m;
  return std::sqrt(std::max(0.0, max_eig(g)));
}

inline double trace_norm(const CMatrix& m) {
  double s = 0.0;
  for (double v : eigenvalues(m.adjoint() * m)) s += std::sqrt(std::max(0.0, v));
  return s;
}

/// The swap F on C^d (x) C^d, F(e_i (x) e_j) = e_j (x) e_i.
inline CMatrix swap(int d) {
  CMatrix f = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

/// Norm of T : l_inf^n -> l_inf^m given by t(i, j) = T(e_j)_i: the largest
/// absolute row sum. For commutative source or target this is also the cb norm.
inline double commutative_map_norm(const CMatrix& t) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) best = std::max(best, t.row(i).cwiseAbs().sum());
  return best;
}

/// Lovasz theta of the 5-cycle.
inline double theta_c5() { return std::sqrt(5.0); }

}  // namespace oracle
