#include "decnorm/json_io.hpp"

#include "decnorm/errors.hpp"

namespace decnorm {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

int int_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw DomainError(where + ": expected an integer");
  return j.get<int>();
}

double real_from_json(const json& j, const std::string& where) {
  if (!j.is_number()) throw DomainError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Algebra& a) { return {{"blocks", a.blocks()}}; }

json to_json(const Space& s) { return {{"algebra", to_json(s.base)}, {"dual", s.is_dual}}; }

json to_json(const LevelElement& x) {
  return {{"space", to_json(x.space())}, {"level", x.level()}, {"matrix", to_json(x.matrix())}};
}

json to_json(const LinMap& t) {
  json choi = json::array();
  for (int b = 0; b < t.source().num_blocks(); ++b) {
    json row = json::array();
    for (int c = 0; c < t.target().num_blocks(); ++c) row.push_back(to_json(t.choi(b, c)));
    choi.push_back(std::move(row));
  }
  return {{"source", to_json(t.source())}, {"target", to_json(t.target())}, {"choi", std::move(choi)}};
}

json to_json(const TensorElement& z) {
  const int n = z.level();
  json coeffs = json::array();
  for (int i = 0; i < n; ++i) {
    json ri = json::array();
    for (int j = 0; j < n; ++j) {
      json rj = json::array();
      for (int p = 0; p < z.left().dim(); ++p) {
        json rp = json::array();
        for (int q = 0; q < z.right().dim(); ++q) rp.push_back(to_json(z(i, j, p, q)));
        rj.push_back(std::move(rp));
      }
      ri.push_back(std::move(rj));
    }
    coeffs.push_back(std::move(ri));
  }
  return {{"left", to_json(z.left())}, {"right", to_json(z.right())}, {"level", n}, {"coeffs", std::move(coeffs)}};
}

namespace {

json terms_to_json(const std::vector<SdpTerm>& terms) {
  json a = json::array();
  for (const auto& t : terms) a.push_back({{"var", t.var}, {"row", t.row}, {"col", t.col}, {"value", to_json(t.value)}});
  return a;
}

std::vector<SdpTerm> terms_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of terms");
  std::vector<SdpTerm> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    const json& t = j[k];
    out.push_back({int_from_json(field(t, "var", w), w + ".var"), int_from_json(field(t, "row", w), w + ".row"),
                   int_from_json(field(t, "col", w), w + ".col"), complex_from_json(field(t, "value", w), w + ".value")});
  }
  return out;
}

}  // namespace

json to_json(const SdpProblem& p) {
  json cons = json::array();
  for (const auto& c : p.constraints) cons.push_back({{"terms", terms_to_json(c.terms)}, {"rhs", c.rhs}});
  return {{"variables", p.dims}, {"sense", to_string(p.sense)}, {"objective", terms_to_json(p.objective)},
          {"constraints", std::move(cons)}};
}

json to_json(const SdpSolution& s) {
  json vars = json::array();
  for (const auto& x : s.variable_values) vars.push_back(to_json(x));
  json y = json::array();
  for (Eigen::Index i = 0; i < s.multipliers.size(); ++i) y.push_back(s.multipliers(i));
  return {{"status", to_string(s.status)},
          {"primal_value", s.primal_value},
          {"dual_value", s.dual_value},
          {"gap", s.gap},
          {"primal_infeasibility", s.primal_infeasibility},
          {"dual_infeasibility", s.dual_infeasibility},
          {"iterations", s.iterations},
          {"dropped_rows", s.dropped_rows},
          {"variable_values", std::move(vars)},
          {"multipliers", std::move(y)}};
}

json to_json(const DecWitness& w) { return {{"S1", to_json(w.s1)}, {"S2", to_json(w.s2)}, {"value", w.value}}; }

json to_json(const FactorizationWitness& f) {
  return {{"R", to_json(f.r)}, {"w", to_json(f.w)}, {"alpha", to_json(f.alpha)}, {"k", f.k}, {"l", f.l}};
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DomainError(where + ": expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) {
      throw DomainError(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = complex_from_json(r[static_cast<std::size_t>(k)], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

Algebra algebra_from_json(const json& j, const std::string& where) {
  const json& b = field(j, "blocks", where);
  if (!b.is_array() || b.empty()) throw DomainError(where + ".blocks: expected a non-empty array of block sizes");
  std::vector<int> blocks;
  for (std::size_t k = 0; k < b.size(); ++k) blocks.push_back(int_from_json(b[k], where + ".blocks"));
  return Algebra(blocks);
}

Space space_from_json(const json& j, const std::string& where) {
  const json& d = field(j, "dual", where);
  if (!d.is_boolean()) throw DomainError(where + ".dual: expected a boolean");
  return {algebra_from_json(field(j, "algebra", where), where + ".algebra"), d.get<bool>()};
}

LevelElement level_element_from_json(const json& j) {
  return {space_from_json(field(j, "space", "element"), "element.space"),
          int_from_json(field(j, "level", "element"), "element.level"),
          matrix_from_json(field(j, "matrix", "element"), "element.matrix")};
}

LinMap linmap_from_json(const json& j) {
  Algebra src = algebra_from_json(field(j, "source", "map"), "map.source");
  Algebra tgt = algebra_from_json(field(j, "target", "map"), "map.target");
  const json& choi = field(j, "choi", "map");
  if (!choi.is_array() || static_cast<int>(choi.size()) != src.num_blocks()) {
    throw DomainError("map.choi: expected " + std::to_string(src.num_blocks()) + " rows of Choi blocks");
  }
  std::vector<CMatrix> blocks;
  for (int b = 0; b < src.num_blocks(); ++b) {
    const json& row = choi[static_cast<std::size_t>(b)];
    if (!row.is_array() || static_cast<int>(row.size()) != tgt.num_blocks()) {
      throw DomainError("map.choi[" + std::to_string(b) + "]: expected " + std::to_string(tgt.num_blocks()) + " blocks");
    }
    for (int c = 0; c < tgt.num_blocks(); ++c) {
      blocks.push_back(matrix_from_json(row[static_cast<std::size_t>(c)],
                                        "map.choi[" + std::to_string(b) + "][" + std::to_string(c) + "]"));
    }
  }
  return {src, tgt, blocks};
}

TensorElement tensor_from_json(const json& j) {
  Space left = space_from_json(field(j, "left", "tensor"), "tensor.left");
  Space right = space_from_json(field(j, "right", "tensor"), "tensor.right");
  const int n = int_from_json(field(j, "level", "tensor"), "tensor.level");
  if (n < 1) throw DomainError("tensor.level: must be >= 1");
  const json& c = field(j, "coeffs", "tensor");
  const std::string dims = std::to_string(n) + "x" + std::to_string(n) + "x" + std::to_string(left.dim()) + "x" +
                           std::to_string(right.dim());
  auto bad = [&]() { return DomainError("tensor.coeffs: expected nested arrays of shape " + dims); };
  std::vector<cplx> coeffs;
  if (!c.is_array() || static_cast<int>(c.size()) != n) throw bad();
  for (int i = 0; i < n; ++i) {
    const json& ci = c[static_cast<std::size_t>(i)];
    if (!ci.is_array() || static_cast<int>(ci.size()) != n) throw bad();
    for (int jj = 0; jj < n; ++jj) {
      const json& cj = ci[static_cast<std::size_t>(jj)];
      if (!cj.is_array() || static_cast<int>(cj.size()) != left.dim()) throw bad();
      for (int p = 0; p < left.dim(); ++p) {
        const json& cp = cj[static_cast<std::size_t>(p)];
        if (!cp.is_array() || static_cast<int>(cp.size()) != right.dim()) throw bad();
        for (int q = 0; q < right.dim(); ++q) coeffs.push_back(complex_from_json(cp[static_cast<std::size_t>(q)], "tensor.coeffs"));
      }
    }
  }
  return {left, right, n, std::move(coeffs)};
}

SdpProblem sdp_problem_from_json(const json& j) {
  SdpProblem p;
  const json& vars = field(j, "variables", "sdp");
  if (!vars.is_array()) throw DomainError("sdp.variables: expected an array of dimensions");
  for (const auto& v : vars) p.dims.push_back(int_from_json(v, "sdp.variables"));
  if (j.contains("sense")) {
    const std::string s = j.at("sense").is_string() ? j.at("sense").get<std::string>() : "";
    if (s == "minimize") p.sense = SdpSense::minimize;
    else if (s == "maximize") p.sense = SdpSense::maximize;
    else throw DomainError("sdp.sense: expected \"minimize\" or \"maximize\"");
  }
  p.objective = terms_from_json(field(j, "objective", "sdp"), "sdp.objective");
  const json& cons = field(j, "constraints", "sdp");
  if (!cons.is_array()) throw DomainError("sdp.constraints: expected an array");
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const std::string w = "sdp.constraints[" + std::to_string(k) + "]";
    p.constraints.push_back({terms_from_json(field(cons[k], "terms", w), w + ".terms"),
                             real_from_json(field(cons[k], "rhs", w), w + ".rhs")});
  }
  p.validate();
  return p;
}

}  // namespace decnorm
