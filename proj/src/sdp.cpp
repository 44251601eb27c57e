#include "decnorm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "decnorm/errors.hpp"

namespace decnorm {

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iter: return "max_iter";
  }
  return "unknown";
}

std::string to_string(SdpSense s) { return s == SdpSense::minimize ? "minimize" : "maximize"; }

int SdpProblem::add_variable(int dim) {
  if (dim < 1) throw DomainError("SdpProblem: variable dimension must be >= 1");
  dims.push_back(dim);
  return static_cast<int>(dims.size()) - 1;
}

void SdpProblem::add_objective(int var, int row, int col, cplx value) { objective.push_back({var, row, col, value}); }

std::vector<SdpTerm> SdpProblem::matrix_terms(int var, const CMatrix& h) {
  std::vector<SdpTerm> t;
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      if (h(r, c) != cplx(0.0)) t.push_back({var, static_cast<int>(r), static_cast<int>(c), h(r, c)});
  return t;
}

void SdpProblem::add_objective_matrix(int var, const CMatrix& h) {
  auto t = matrix_terms(var, h);
  objective.insert(objective.end(), t.begin(), t.end());
}

// Re X(r,c) = Re tr(H X) with H = (E_cr + E_rc)/2; Im X(r,c) with H = (-i E_cr + i E_rc)/2.
std::vector<SdpTerm> SdpProblem::real_entry(int var, int r, int c) {
  if (r == c) return {{var, r, r, 1.0}};
  return {{var, c, r, 0.5}, {var, r, c, 0.5}};
}

std::vector<SdpTerm> SdpProblem::imag_entry(int var, int r, int c) {
  if (r == c) throw DomainError("SdpProblem::imag_entry: diagonal entries of a Hermitian variable are real");
  return {{var, c, r, cplx(0.0, -0.5)}, {var, r, c, cplx(0.0, 0.5)}};
}

void SdpProblem::add_constraint(std::vector<SdpTerm> terms, double rhs) {
  constraints.push_back({std::move(terms), rhs});
}

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void check_terms(const SdpProblem& p, const std::vector<SdpTerm>& terms, const std::string& where) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(p.dims.size())) {
      throw DomainError(where + ": variable index " + std::to_string(t.var) + " out of range");
    }
    const int d = p.dims[static_cast<std::size_t>(t.var)];
    if (t.row < 0 || t.row >= d || t.col < 0 || t.col >= d) {
      throw DomainError(where + ": entry (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                        ") outside variable of dimension " + std::to_string(d));
    }
    if (!finite(t.value)) throw DomainError(where + ": non-finite coefficient");
  }
}

}  // namespace

void SdpProblem::validate() const {
  if (dims.empty()) throw DomainError("SdpProblem: at least one variable is required");
  for (int d : dims)
    if (d < 1) throw DomainError("SdpProblem: variable dimension must be >= 1");
  check_terms(*this, objective, "SdpProblem objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    check_terms(*this, constraints[i].terms, "SdpProblem constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) throw DomainError("SdpProblem: non-finite right-hand side");
  }
}

double evaluate_terms(const std::vector<SdpTerm>& terms, const std::vector<CMatrix>& x) {
  double s = 0.0;
  for (const auto& t : terms) s += (t.value * x[static_cast<std::size_t>(t.var)](t.col, t.row)).real();
  return s;
}

namespace {

struct Entry {
  int r;
  int c;
  cplx v;
};

// Hermitian coefficient matrix of one constraint restricted to one variable.
struct BlockTerms {
  int var;
  std::vector<Entry> entries;
};

struct Row {
  std::vector<BlockTerms> blocks;
  double rhs;
  int original;
};

std::vector<BlockTerms> hermitize(const std::vector<SdpTerm>& terms) {
  std::map<std::tuple<int, int, int>, cplx> acc;
  for (const auto& t : terms) {
    acc[{t.var, t.row, t.col}] += t.value * 0.5;
    acc[{t.var, t.col, t.row}] += std::conj(t.value) * 0.5;
  }
  std::vector<BlockTerms> out;
  for (const auto& [key, v] : acc) {
    if (v == cplx(0.0)) continue;
    const int var = std::get<0>(key);
    if (out.empty() || out.back().var != var) out.push_back({var, {}});
    out.back().entries.push_back({std::get<1>(key), std::get<2>(key), v});
  }
  return out;
}

bool same_terms(const std::vector<BlockTerms>& a, const std::vector<BlockTerms>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].var != b[i].var || a[i].entries.size() != b[i].entries.size()) return false;
    for (std::size_t k = 0; k < a[i].entries.size(); ++k) {
      const Entry& x = a[i].entries[k];
      const Entry& y = b[i].entries[k];
      if (x.r != y.r || x.c != y.c || x.v != y.v) return false;
    }
  }
  return true;
}

double inner(const std::vector<Entry>& e, const CMatrix& x) {
  double s = 0.0;
  for (const auto& t : e) s += (t.v * x(t.c, t.r)).real();
  return s;
}

double inner_dense(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j].cwiseProduct(b[j].transpose())).sum().real();
  return s;
}

double frob(const std::vector<CMatrix>& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

struct Scaling {
  CMatrix g;
  CMatrix g_inv;
  CMatrix w;
  RVector v;
};

class Solver {
 public:
  Solver(const SdpProblem& p, const SdpOptions& opts) : p_(p), opts_(opts) {}

  SdpSolution run();

 private:
  void presolve(SdpSolution& out);
  RVector apply_a(const std::vector<CMatrix>& x) const;
  std::vector<CMatrix> apply_at(const RVector& y) const;
  CMatrix schur(const std::vector<Scaling>& sc) const;
  void newton(const std::vector<Scaling>& sc, const Eigen::LLT<CMatrix>& chol, const RVector& rp,
              const std::vector<CMatrix>& rd, const std::vector<CMatrix>& rc, RVector& dy,
              std::vector<CMatrix>& dx, std::vector<CMatrix>& dz) const;
  static double max_step(const RVector& v, const CMatrix& scaled_dir);

  const SdpProblem& p_;
  SdpOptions opts_;
  std::vector<Row> rows_;
  std::vector<CMatrix> c_;
  // Per variable: (row index, position in that row's block list).
  std::vector<std::vector<std::pair<int, int>>> by_var_;
  int total_dim_ = 0;
  bool infeasible_presolve_ = false;
};

void Solver::presolve(SdpSolution& out) {
  for (std::size_t i = 0; i < p_.constraints.size(); ++i) {
    Row row{hermitize(p_.constraints[i].terms), p_.constraints[i].rhs, static_cast<int>(i)};
    if (row.blocks.empty()) {
      out.dropped_rows = true;
      if (std::abs(row.rhs) > opts_.feas_tol) infeasible_presolve_ = true;
      continue;
    }
    bool dup = false;
    for (const auto& kept : rows_) {
      if (same_terms(kept.blocks, row.blocks)) {
        dup = true;
        out.dropped_rows = true;
        if (std::abs(kept.rhs - row.rhs) > opts_.feas_tol * (1.0 + std::abs(kept.rhs))) infeasible_presolve_ = true;
        break;
      }
    }
    if (!dup) rows_.push_back(std::move(row));
  }
  by_var_.assign(p_.dims.size(), {});
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t k = 0; k < rows_[i].blocks.size(); ++k)
      by_var_[static_cast<std::size_t>(rows_[i].blocks[k].var)].push_back({static_cast<int>(i), static_cast<int>(k)});

  const double sign = p_.sense == SdpSense::minimize ? 1.0 : -1.0;
  for (int d : p_.dims) {
    c_.push_back(CMatrix::Zero(d, d));
    total_dim_ += d;
  }
  for (const auto& bt : hermitize(p_.objective))
    for (const auto& e : bt.entries) c_[static_cast<std::size_t>(bt.var)](e.r, e.c) += sign * e.v;
}

RVector Solver::apply_a(const std::vector<CMatrix>& x) const {
  RVector r(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double s = 0.0;
    for (const auto& bt : rows_[i].blocks) s += inner(bt.entries, x[static_cast<std::size_t>(bt.var)]);
    r(static_cast<Eigen::Index>(i)) = s;
  }
  return r;
}

std::vector<CMatrix> Solver::apply_at(const RVector& y) const {
  std::vector<CMatrix> out;
  for (int d : p_.dims) out.push_back(CMatrix::Zero(d, d));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (const auto& bt : rows_[i].blocks)
      for (const auto& e : bt.entries) out[static_cast<std::size_t>(bt.var)](e.r, e.c) += yi * e.v;
  }
  return out;
}

// M(k, i) = <A_k, W A_i W>, assembled per variable.
CMatrix Solver::schur(const std::vector<Scaling>& sc) const {
  const auto m = static_cast<Eigen::Index>(rows_.size());
  CMatrix mm = CMatrix::Zero(m, m);
  for (std::size_t j = 0; j < p_.dims.size(); ++j) {
    const CMatrix& w = sc[j].w;
    const int n = p_.dims[j];
    const auto& list = by_var_[j];
    for (std::size_t a = 0; a < list.size(); ++a) {
      const auto& ei = rows_[static_cast<std::size_t>(list[a].first)].blocks[static_cast<std::size_t>(list[a].second)].entries;
      CMatrix b;
      if (static_cast<int>(ei.size()) > n) {
        CMatrix dense = CMatrix::Zero(n, n);
        for (const auto& e : ei) dense(e.r, e.c) += e.v;
        b = w * dense * w;
      } else {
        b = CMatrix::Zero(n, n);
        for (const auto& e : ei) b.noalias() += e.v * w.col(e.r) * w.row(e.c);
      }
      for (std::size_t k = a; k < list.size(); ++k) {
        const auto& ek = rows_[static_cast<std::size_t>(list[k].first)].blocks[static_cast<std::size_t>(list[k].second)].entries;
        const double val = inner(ek, b);
        mm(list[k].first, list[a].first) += val;
        if (k != a) mm(list[a].first, list[k].first) += val;
      }
    }
  }
  return mm;
}

void Solver::newton(const std::vector<Scaling>& sc, const Eigen::LLT<CMatrix>& chol, const RVector& rp,
                    const std::vector<CMatrix>& rd, const std::vector<CMatrix>& rc, RVector& dy,
                    std::vector<CMatrix>& dx, std::vector<CMatrix>& dz) const {
  std::vector<CMatrix> t(rc.size());
  for (std::size_t j = 0; j < rc.size(); ++j) t[j] = rc[j] - sc[j].w * rd[j] * sc[j].w;
  const RVector rhs = rp - apply_a(t);
  if (rhs.size() > 0) {
    const CMatrix sol = chol.solve(rhs.cast<cplx>());
    dy = sol.real();
  } else {
    dy = RVector(0);
  }
  const auto aty = apply_at(dy);
  dz.resize(rc.size());
  dx.resize(rc.size());
  for (std::size_t j = 0; j < rc.size(); ++j) {
    dz[j] = hermitian_part(rd[j] - aty[j]);
    dx[j] = hermitian_part(rc[j] - sc[j].w * dz[j] * sc[j].w);
  }
}

// Largest alpha with V + alpha D >= 0 (V diagonal positive).
double Solver::max_step(const RVector& v, const CMatrix& d) {
  const Eigen::Index n = v.size();
  CMatrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = d(i, j) / std::sqrt(v(i) * v(j));
  const double lmin = eig_hermitian(HermitianMatrix(k)).values.minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

SdpSolution Solver::run() {
  SdpSolution out;
  presolve(out);
  const std::size_t nv = p_.dims.size();
  const auto m = static_cast<Eigen::Index>(rows_.size());
  RVector b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = rows_[static_cast<std::size_t>(i)].rhs;
  const double bnorm = b.norm();
  const double cnorm = frob(c_);
  double cmax = 0.0;
  for (const auto& c : c_) cmax = std::max(cmax, max_abs(c));
  const double bmax = m > 0 ? b.cwiseAbs().maxCoeff() : 0.0;

  std::vector<CMatrix> x;
  std::vector<CMatrix> z;
  for (int d : p_.dims) {
    x.push_back((1.0 + bmax) * CMatrix::Identity(d, d));
    z.push_back((1.0 + cmax) * CMatrix::Identity(d, d));
  }
  RVector y = RVector::Zero(m);

  const double sign = p_.sense == SdpSense::minimize ? 1.0 : -1.0;
  auto finish = [&](SdpStatus status, int iter, double pval, double dval, double gap, double pinf, double dinf) {
    out.status = infeasible_presolve_ ? SdpStatus::infeasible : status;
    out.iterations = iter;
    out.primal_value = sign * pval;
    out.dual_value = sign * dval;
    out.gap = gap;
    out.primal_infeasibility = pinf;
    out.dual_infeasibility = dinf;
    out.variable_values = x;
    out.dual_slacks = z;
    out.multipliers = RVector::Zero(static_cast<Eigen::Index>(p_.constraints.size()));
    for (Eigen::Index i = 0; i < m; ++i) out.multipliers(rows_[static_cast<std::size_t>(i)].original) = y(i);
    return out;
  };

  if (infeasible_presolve_) return finish(SdpStatus::infeasible, 0, 0, 0, 0, 1, 0);

  double best_pinf = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int iter = 0;; ++iter) {
    const RVector rp = b - apply_a(x);
    const auto aty = apply_at(y);
    std::vector<CMatrix> rd(nv);
    for (std::size_t j = 0; j < nv; ++j) rd[j] = c_[j] - z[j] - aty[j];
    const double pval = inner_dense(c_, x);
    const double dval = m > 0 ? b.dot(y) : 0.0;
    const double pinf = rp.norm() / (1.0 + bnorm);
    const double dinf = frob(rd) / (1.0 + cnorm);
    const double gap = std::abs(pval - dval) / (1.0 + std::abs(pval) + std::abs(dval));
    if (!std::isfinite(pval) || !std::isfinite(dval)) {
      throw SolverFailure("SDP iterate became non-finite at iteration " + std::to_string(iter), iter, pinf);
    }
    if (gap <= opts_.gap_tol && pinf <= opts_.feas_tol && dinf <= opts_.feas_tol) {
      return finish(SdpStatus::optimal, iter, pval, dval, gap, pinf, dinf);
    }
    // Divergence heuristics: a dual ray certifies primal infeasibility, a primal ray unboundedness.
    double xmax = 0.0;
    double zmax = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      xmax = std::max(xmax, max_abs(x[j]));
      zmax = std::max(zmax, max_abs(z[j]));
    }
    if (pinf < best_pinf * 0.99) {
      best_pinf = pinf;
      stall = 0;
    } else {
      ++stall;
    }
    if (dval > 1e10 * (1.0 + cnorm) && dinf <= 1e-6 && stall > 5) {
      return finish(SdpStatus::infeasible, iter, pval, dval, gap, pinf, dinf);
    }
    if (pval < -1e10 * (1.0 + bnorm) && pinf <= 1e-6 && xmax > 1e10) {
      return finish(SdpStatus::unbounded, iter, pval, dval, gap, pinf, dinf);
    }
    if (iter >= opts_.max_iter) {
      SdpStatus st = SdpStatus::max_iter;
      if (pinf > 1e-4 && stall > 10 && zmax > 1e6) st = SdpStatus::infeasible;
      return finish(st, iter, pval, dval, gap, pinf, dinf);
    }

    std::vector<Scaling> sc(nv);
    double mu = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      Eigen::LLT<CMatrix> lx(x[j]);
      if (lx.info() != Eigen::Success) {
        throw SolverFailure("SDP primal iterate lost definiteness at iteration " + std::to_string(iter), iter, pinf);
      }
      const CMatrix l = lx.matrixL();
      const CMatrix s = l.adjoint() * z[j] * l;
      auto e = eig_hermitian(HermitianMatrix(s));
      // Near optimality X Z is rank deficient to rounding; floor its spectrum.
      const double top = e.values.maxCoeff();
      if (!(top > 0.0)) {
        throw SolverFailure("SDP dual iterate lost definiteness at iteration " + std::to_string(iter), iter, pinf);
      }
      e.values = e.values.cwiseMax(1e-15 * top);
      const RVector quarter = e.values.array().pow(-0.25);
      sc[j].g = l * e.vectors * quarter.asDiagonal();
      const CMatrix linv = l.triangularView<Eigen::Lower>().solve(CMatrix::Identity(l.rows(), l.cols()));
      sc[j].g_inv = e.values.array().pow(0.25).matrix().asDiagonal() * e.vectors.adjoint() * linv;
      sc[j].w = sc[j].g * sc[j].g.adjoint();
      sc[j].v = e.values.array().sqrt();
      mu += sc[j].v.squaredNorm();
    }
    mu /= total_dim_;

    CMatrix mm = schur(sc);
    Eigen::LLT<CMatrix> chol;
    if (m > 0) {
      chol.compute(mm);
      if (chol.info() != Eigen::Success) {
        const double shift = 1e-12 * std::max(1.0, mm.diagonal().real().maxCoeff());
        mm.diagonal().array() += shift;
        chol.compute(mm);
        if (chol.info() != Eigen::Success) {
          throw SolverFailure("singular Newton system at iteration " + std::to_string(iter), iter, pinf);
        }
      }
    }

    auto scaled = [&](const std::vector<CMatrix>& dx, const std::vector<CMatrix>& dz, std::vector<CMatrix>& sx,
                      std::vector<CMatrix>& sz) {
      sx.resize(nv);
      sz.resize(nv);
      for (std::size_t j = 0; j < nv; ++j) {
        sx[j] = hermitian_part(sc[j].g_inv * dx[j] * sc[j].g_inv.adjoint());
        sz[j] = hermitian_part(sc[j].g.adjoint() * dz[j] * sc[j].g);
      }
    };
    auto steps = [&](const std::vector<CMatrix>& sx, const std::vector<CMatrix>& sz) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = ap;
      for (std::size_t j = 0; j < nv; ++j) {
        ap = std::min(ap, max_step(sc[j].v, sx[j]));
        ad = std::min(ad, max_step(sc[j].v, sz[j]));
      }
      return std::pair<double, double>{ap, ad};
    };

    // Predictor.
    std::vector<CMatrix> rc(nv);
    for (std::size_t j = 0; j < nv; ++j) rc[j] = -x[j];
    RVector dy;
    std::vector<CMatrix> dx;
    std::vector<CMatrix> dz;
    newton(sc, chol, rp, rd, rc, dy, dx, dz);
    std::vector<CMatrix> sx;
    std::vector<CMatrix> sz;
    scaled(dx, dz, sx, sz);
    auto [ap, ad] = steps(sx, sz);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      const CMatrix xa = x[j] + ap * dx[j];
      const CMatrix za = z[j] + ad * dz[j];
      mu_aff += (xa.cwiseProduct(za.transpose())).sum().real();
    }
    mu_aff /= total_dim_;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

    // Corrector: (v_i + v_j) (dX~ + dZ~)_ij = 2 sigma mu I - 2 V^2 - (dX~a dZ~a + dZ~a dX~a).
    for (std::size_t j = 0; j < nv; ++j) {
      const RVector& v = sc[j].v;
      CMatrix r = -(sx[j] * sz[j] + sz[j] * sx[j]);
      for (Eigen::Index i = 0; i < v.size(); ++i) r(i, i) += 2.0 * sigma * mu - 2.0 * v(i) * v(i);
      for (Eigen::Index a = 0; a < v.size(); ++a)
        for (Eigen::Index c = 0; c < v.size(); ++c) r(a, c) /= (v(a) + v(c));
      rc[j] = sc[j].g * r * sc[j].g.adjoint();
    }
    newton(sc, chol, rp, rd, rc, dy, dx, dz);
    scaled(dx, dz, sx, sz);
    std::tie(ap, ad) = steps(sx, sz);
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);

    // The eigenvalue step bound is computed in the scaled frame; rounding can
    // still leave an iterate on the boundary, so backtrack until both factor.
    std::vector<CMatrix> xn(nv);
    std::vector<CMatrix> zn(nv);
    auto definite = [](const CMatrix& a) {
      Eigen::LLT<CMatrix> f(a);
      return f.info() == Eigen::Success;
    };
    for (int tries = 0;; ++tries) {
      bool ok = true;
      for (std::size_t j = 0; j < nv && ok; ++j) {
        xn[j] = hermitian_part(x[j] + ap * dx[j]);
        zn[j] = hermitian_part(z[j] + ad * dz[j]);
        ok = definite(xn[j]) && definite(zn[j]);
      }
      if (ok) break;
      // A collapsed step means the iterate has stalled; report it as such.
      if (tries == 40) return finish(SdpStatus::max_iter, iter, pval, dval, gap, pinf, dinf);
      ap *= 0.7;
      ad *= 0.7;
    }
    x.swap(xn);
    z.swap(zn);
    y += ad * dy;
  }
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
  p.validate();
  if (!(opts.gap_tol > 0.0) || !(opts.feas_tol > 0.0) || opts.max_iter < 0) {
    throw DomainError("SdpOptions: tolerances must be positive and max_iter non-negative");
  }
  return Solver(p, opts).run();
}

SdpCertificate check_certificate(const SdpProblem& p, const SdpSolution& s) {
  p.validate();
  if (s.variable_values.size() != p.dims.size()) throw DomainError("check_certificate: variable count mismatch");
  for (std::size_t j = 0; j < p.dims.size(); ++j) {
    const auto& xj = s.variable_values[j];
    if (xj.rows() != p.dims[j] || xj.cols() != p.dims[j]) {
      throw DomainError("check_certificate: variable " + std::to_string(j) + " has wrong size");
    }
  }
  const double sign = p.sense == SdpSense::minimize ? 1.0 : -1.0;
  SdpCertificate cert;

  double res = 0.0;
  double bsq = 0.0;
  for (const auto& c : p.constraints) {
    const double r = evaluate_terms(c.terms, s.variable_values) - c.rhs;
    res += r * r;
    bsq += c.rhs * c.rhs;
  }
  double neg = 0.0;
  for (const auto& xj : s.variable_values) {
    neg = std::max(neg, -eig_hermitian(HermitianMatrix(xj)).values.minCoeff());
  }
  cert.primal_feas = std::max(std::sqrt(res) / (1.0 + std::sqrt(bsq)), neg);

  // Dual slack C - A*(y) in minimization form.
  std::vector<CMatrix> slack;
  for (int d : p.dims) slack.push_back(CMatrix::Zero(d, d));
  auto add = [&](const std::vector<SdpTerm>& terms, double scale) {
    for (const auto& t : terms) {
      slack[static_cast<std::size_t>(t.var)](t.row, t.col) += 0.5 * scale * t.value;
      slack[static_cast<std::size_t>(t.var)](t.col, t.row) += 0.5 * scale * std::conj(t.value);
    }
  };
  add(p.objective, sign);
  const double cnorm = frob(slack);
  double dval = 0.0;
  if (s.multipliers.size() == static_cast<Eigen::Index>(p.constraints.size())) {
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
      const double yi = s.multipliers(static_cast<Eigen::Index>(i));
      add(p.constraints[i].terms, -yi);
      dval += yi * p.constraints[i].rhs;
    }
  } else if (s.multipliers.size() != 0) {
    throw DomainError("check_certificate: multiplier count mismatch");
  }
  double dneg = 0.0;
  for (const auto& sj : slack) dneg = std::max(dneg, -eig_hermitian(HermitianMatrix(sj)).values.minCoeff());
  cert.dual_feas = dneg / (1.0 + cnorm);

  double pval = 0.0;
  for (const auto& t : p.objective) {
    pval += sign * (t.value * s.variable_values[static_cast<std::size_t>(t.var)](t.col, t.row)).real();
  }
  cert.gap = std::abs(pval - dval) / (1.0 + std::abs(pval) + std::abs(dval));
  return cert;
}

}  // namespace decnorm
