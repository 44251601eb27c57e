#pragma once

#include <string>

#include <json.hpp>

#include "decnorm/norms.hpp"
#include "decnorm/sdp.hpp"
#include "decnorm/tensor.hpp"

namespace decnorm {

using json = nlohmann::json;

// Complex scalars are [re, im]; matrices are arrays of rows. Decoders throw
// DomainError naming the offending field.

json to_json(cplx c);
json to_json(const CMatrix& m);
json to_json(const Algebra& a);
json to_json(const Space& s);
json to_json(const LevelElement& x);
json to_json(const LinMap& t);
json to_json(const TensorElement& z);
json to_json(const SdpProblem& p);
json to_json(const SdpSolution& s);
json to_json(const DecWitness& w);
json to_json(const FactorizationWitness& f);

cplx complex_from_json(const json& j, const std::string& where);
CMatrix matrix_from_json(const json& j, const std::string& where);
Algebra algebra_from_json(const json& j, const std::string& where = "algebra");
Space space_from_json(const json& j, const std::string& where = "space");
LevelElement level_element_from_json(const json& j);
LinMap linmap_from_json(const json& j);
TensorElement tensor_from_json(const json& j);
SdpProblem sdp_problem_from_json(const json& j);

}  // namespace decnorm
