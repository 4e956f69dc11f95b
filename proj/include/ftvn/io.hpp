#pragma once

#include "ftvn/axioms.hpp"
#include "ftvn/eja.hpp"
#include "ftvn/envelope.hpp"
#include "ftvn/hyperbolic.hpp"
#include "ftvn/nds.hpp"
#include "ftvn/optimality.hpp"
#include "ftvn/reduce.hpp"

#include <functional>
#include <map>

namespace ftvn::io {

using json = nlohmann::json;

/// Raised for malformed instance strings and JSON documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Name -> factory table. Each factory receives the text after "<name>:".
class Registry {
 public:
  using Factory = std::function<SystemPtr(const std::string& args)>;

  static Registry& global();
  void add(const std::string& name, Factory factory, std::string usage);
  SystemPtr make(const std::string& spec) const;
  std::vector<std::string> usages() const;

 private:
  std::map<std::string, std::pair<Factory, std::string>> table_;
};

/// "rn:3", "sym:2", "spin:4", "svd:3x2", "rot90", "z-counterexample",
/// "product:rn:2+sym:2", "hyp:det_sym:3", "hyp:coordinate_product:3".
SystemPtr make_instance(const std::string& spec);
/// A spec string, or an object {"kind":"hyp","poly":{...}}.
SystemPtr make_instance(const json& j);

HyperbolicPolynomial polynomial_from_json(const json& j);

// Numbers are written as {"dec": ..., "hex": "..."}; vectors as parallel arrays.
std::string hexfloat(double v);
json num(double v);
json vec(const Eigen::VectorXd& v);
double read_num(const json& j);

Element element_from_json(const FtvnSystem& inst, const json& j);
json element_to_json(const FtvnSystem& inst, const Element& x);
SpecPoint point_from_json(const json& j);
PointSet points_from_json(const json& j);

SpectralSetSpec set_from_json(const FtvnSystem& inst, const json& j);
Objective objective_from_json(const FtvnSystem& inst, const json& j);
SpectralFunctionSpec spectral_fn_from_json(const json& j);
Combiner combiner_from_json(const json& j);
std::vector<AffinePiece> pieces_from_json(const FtvnSystem& inst, const json& j);

struct Problem {
  SystemPtr inst;
  Objective objective;
  SpectralSetSpec set;
  SpectralFunctionSpec phi;
  Combiner combiner = Combiner::sum();
  Sense sense = Sense::Max;
  SolveOptions options;
};

Problem problem_from_json(const json& j);

json to_json(const CommutationCert& cert);
json to_json(const AxiomReport& rep);
json to_json(const CommutationSuiteReport& rep);
json to_json(const FtvnSystem& inst, const SolveReport& rep);

}  // namespace ftvn::io
