#include "ftvn/io.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

namespace ftvn::io {

namespace {

long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size() || v <= 0) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a positive integer for " + what + ", got '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::shared_ptr<const JordanAlgebra> make_algebra(const std::string& spec) {
  auto sys = make_instance(spec);
  auto alg = std::dynamic_pointer_cast<const JordanAlgebra>(sys);
  if (!alg) throw ParseError("product factor '" + spec + "' is not a Jordan algebra");
  return alg;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ParseError("matrix data must be a nonempty array of rows");
  const auto m = static_cast<Index>(rows.size());
  const auto n = static_cast<Index>(rows[0].size());
  Matrix out(m, n);
  for (Index i = 0; i < m; ++i) {
    if (static_cast<Index>(rows[i].size()) != n) throw ParseError("matrix rows differ in length");
    for (Index j = 0; j < n; ++j) out(i, j) = read_num(rows[i][j]);
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void register_builtins(Registry& r) {
  r.add("rn", [](const std::string& a) { return std::make_shared<RnAlgebra>(parse_int(a, "rn")); }, "rn:N");
  r.add("sym", [](const std::string& a) { return std::make_shared<SymAlgebra>(parse_int(a, "sym")); }, "sym:N");
  r.add("spin", [](const std::string& a) { return std::make_shared<SpinAlgebra>(parse_int(a, "spin")); },
        "spin:N");
  r.add("svd",
        [](const std::string& a) -> SystemPtr {
          const auto parts = split(a, 'x');
          if (parts.size() != 2) throw ParseError("svd expects MxN, got '" + a + "'");
          return std::make_shared<RectMatrixSpace>(parse_int(parts[0], "svd rows"), parse_int(parts[1], "svd cols"));
        },
        "svd:MxN (M >= N)");
  r.add("rot90", [](const std::string&) -> SystemPtr { return rotation_instance(); }, "rot90");
  r.add("z-counterexample", [](const std::string&) -> SystemPtr { return z_counterexample_instance(); },
        "z-counterexample");
  r.add("product",
        [](const std::string& a) -> SystemPtr {
          std::vector<AlgebraPtr> parts;
          for (const auto& p : split(a, '+')) parts.push_back(make_algebra(p));
          if (parts.empty()) throw ParseError("product needs at least one factor");
          return std::make_shared<ProductAlgebra>(std::move(parts));
        },
        "product:A+B+... (Jordan factors)");
  r.add("hyp",
        [](const std::string& a) -> SystemPtr {
          const auto parts = split(a, ':');
          if (parts.size() != 2) throw ParseError("hyp expects KIND:N, got '" + a + "'");
          const Index n = parse_int(parts[1], "hyp degree");
          if (parts[0] == "coordinate_product") return std::make_shared<HyperbolicSystem>(coordinate_product(n));
          if (parts[0] == "det_sym") return std::make_shared<HyperbolicSystem>(det_sym(n));
          throw ParseError("unknown hyperbolic polynomial '" + parts[0] + "'");
        },
        "hyp:coordinate_product:N | hyp:det_sym:N");
}

}  // namespace

// ---------------------------------------------------------------------------

Registry& Registry::global() {
  static Registry* reg = [] {
    auto* r = new Registry;
    register_builtins(*r);
    return r;
  }();
  return *reg;
}

void Registry::add(const std::string& name, Factory factory, std::string usage) {
  table_[name] = {std::move(factory), std::move(usage)};
}

SystemPtr Registry::make(const std::string& spec) const {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  const auto it = table_.find(head);
  if (it == table_.end()) throw ParseError("unknown instance '" + spec + "'");
  return it->second.first(args);
}

std::vector<std::string> Registry::usages() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : table_) out.push_back(entry.second);
  return out;
}

SystemPtr make_instance(const std::string& spec) { return Registry::global().make(spec); }

SystemPtr make_instance(const json& j) {
  if (j.is_string()) return make_instance(j.get<std::string>());
  if (j.is_object() && j.value("kind", "") == "hyp") {
    return std::make_shared<HyperbolicSystem>(polynomial_from_json(j.at("poly")), j.value("seed", 7ULL));
  }
  throw ParseError("instance must be a string or {\"kind\":\"hyp\",\"poly\":{...}}");
}

HyperbolicPolynomial polynomial_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Index n = j.at("n").get<Index>();
  if (kind == "coordinate_product") {
    std::optional<Element> e;
    if (j.contains("e")) e = point_from_json(j.at("e"));
    return coordinate_product(n, e);
  }
  if (kind == "det_sym") return det_sym(n);
  if (kind == "custom_monomials") {
    std::vector<Monomial> monos;
    for (const auto& m : j.at("monomials")) {
      monos.push_back({read_num(m.at("coef")), m.at("powers").get<std::vector<int>>()});
    }
    return custom_monomials(n, std::move(monos), point_from_json(j.at("e")));
  }
  throw ParseError("unknown polynomial kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Numbers

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

json num(double v) {
  json out;
  if (std::isfinite(v)) {
    out["dec"] = v;
  } else {
    out["dec"] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  }
  out["hex"] = hexfloat(v);
  return out;
}

json vec(const Eigen::VectorXd& v) {
  json dec = json::array();
  json hex = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    dec.push_back(v[i]);
    hex.push_back(hexfloat(v[i]));
  }
  return {{"dec", dec}, {"hex", hex}};
}

double read_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && !s.empty()) return v;
  }
  if (j.is_object() && j.contains("hex")) return read_num(j.at("hex"));
  throw ParseError("expected a number, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Elements and points

SpecPoint point_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("dec") ? j.at("dec") : j;
  if (!arr.is_array()) throw ParseError("expected an array of numbers, got " + j.dump());
  SpecPoint q(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) q[static_cast<Index>(i)] = read_num(arr[i]);
  return q;
}

PointSet points_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of points");
  PointSet out;
  for (const auto& p : j) out.push_back(point_from_json(p));
  return out;
}

Element element_from_json(const FtvnSystem& inst, const json& j) {
  Element x;
  if (j.is_array()) {
    x = point_from_json(j);
  } else if (j.is_object()) {
    const std::string kind = j.value("kind", "");
    if (kind == "rn") {
      x = point_from_json(j.at("data"));
      if (const auto* z = dynamic_cast<const SubspacePseudoInstance*>(&inst); z && x.size() == z->dim_w()) {
        const Element coords = z->basis().transpose() * x;
        if ((z->basis() * coords - x).norm() > 1e-9 * (1.0 + x.norm())) {
          throw ContractError("point " + j.dump() + " does not lie in the subspace Z");
        }
        x = coords;
      }
    } else if (kind == "sym") {
      const Matrix m = matrix_from_json(j.at("data"));
      if (j.contains("n") && j.at("n").get<Index>() != m.rows()) throw DimensionMismatch("sym: n disagrees with data");
      if (const auto* s = dynamic_cast<const SymAlgebra*>(&inst)) {
        x = s->from_matrix(m);
      } else if (dynamic_cast<const HyperbolicSystem*>(&inst) && inst.name().rfind("hyp:det_sym", 0) == 0) {
        x = svec(m);
      } else {
        throw ContractError("a sym element needs a sym or det_sym instance, not " + inst.name());
      }
    } else if (kind == "spin") {
      const SpecPoint bar = point_from_json(j.at("xbar"));
      x.resize(bar.size() + 1);
      x[0] = read_num(j.at("x0"));
      x.tail(bar.size()) = bar;
    } else if (kind == "rect") {
      const auto* r = dynamic_cast<const RectMatrixSpace*>(&inst);
      if (!r) throw ContractError("a rect element needs an svd instance, not " + inst.name());
      const Matrix m = matrix_from_json(j.at("data"));
      if (m.rows() != r->rows() || m.cols() != r->cols()) throw DimensionMismatch("rect: shape disagrees with instance");
      x = r->from_matrix(m);
    } else if (kind == "product") {
      const auto* p = dynamic_cast<const ProductAlgebra*>(&inst);
      if (!p) throw ContractError("a product element needs a product instance, not " + inst.name());
      const auto& parts = j.at("parts");
      if (parts.size() != p->parts().size()) throw DimensionMismatch("product: wrong number of parts");
      x.resize(p->dim_v());
      for (std::size_t k = 0; k < parts.size(); ++k) {
        const Element b = element_from_json(*p->parts()[k], parts[k]);
        x.segment(p->offset(k), b.size()) = b;
      }
    } else {
      throw ParseError("unknown element kind '" + kind + "'");
    }
  } else {
    throw ParseError("element must be an array or an object");
  }
  inst.require_element(x);
  return x;
}

json element_to_json(const FtvnSystem& inst, const Element& x) {
  json out;
  if (const auto* s = dynamic_cast<const SymAlgebra*>(&inst)) {
    out = {{"kind", "sym"}, {"n", s->order()}, {"data", matrix_to_json(s->to_matrix(x))}};
  } else if (dynamic_cast<const SpinAlgebra*>(&inst)) {
    json bar = json::array();
    for (Index i = 1; i < x.size(); ++i) bar.push_back(x[i]);
    out = {{"kind", "spin"}, {"x0", x[0]}, {"xbar", bar}};
  } else if (const auto* r = dynamic_cast<const RectMatrixSpace*>(&inst)) {
    out = {{"kind", "rect"}, {"m", r->rows()}, {"n", r->cols()}, {"data", matrix_to_json(r->to_matrix(x))}};
  } else if (const auto* p = dynamic_cast<const ProductAlgebra*>(&inst)) {
    json parts = json::array();
    for (std::size_t k = 0; k < p->parts().size(); ++k) parts.push_back(element_to_json(*p->parts()[k], p->block(x, k)));
    out = {{"kind", "product"}, {"parts", parts}};
  } else if (const auto* z = dynamic_cast<const SubspacePseudoInstance*>(&inst)) {
    out = {{"kind", "rn"}, {"data", vec(z->embed(x))["dec"]}, {"coords", vec(x)["dec"]}};
  } else {
    out = {{"kind", "rn"}, {"data", vec(x)["dec"]}};
  }
  out["hex"] = vec(x)["hex"];
  return out;
}

// ---------------------------------------------------------------------------
// Problems

SpectralSetSpec set_from_json(const FtvnSystem& inst, const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    return SpectralSetSpec::finite(points_from_json(j.at("points")), j.value("permutation_invariant", false));
  }
  if (kind == "polyhedron") {
    std::vector<Halfspace> hs;
    for (const auto& h : j.at("halfspaces")) {
      Halfspace half{point_from_json(h.at("normal")), read_num(h.at("offset"))};
      inst.require_point(half.normal, "halfspace normal");
      hs.push_back(std::move(half));
    }
    return SpectralSetSpec::polyhedron(std::move(hs));
  }
  if (kind == "orbit") return SpectralSetSpec::orbit(element_from_json(inst, j.at("u")));
  if (kind == "ball") {
    const Index n = inst.dim_w();
    const double r = read_num(j.at("radius"));
    const SpecPoint center = j.contains("center") ? point_from_json(j.at("center")) : SpecPoint(SpecPoint::Zero(n));
    inst.require_point(center, "ball center");
    const int res = j.value("resolution", 65);
    return SpectralSetSpec::grid(
        [center, r](const SpecPoint& q) { return (q - center).norm() <= r * (1.0 + 1e-12); },
        center.array() - r, center.array() + r, res);
  }
  throw ParseError("unknown set kind '" + kind + "'");
}

std::vector<AffinePiece> pieces_from_json(const FtvnSystem& inst, const json& j) {
  std::vector<AffinePiece> out;
  for (const auto& p : j) out.push_back({element_from_json(inst, p.at("c")), p.contains("alpha") ? read_num(p.at("alpha")) : 0.0});
  return out;
}

Objective objective_from_json(const FtvnSystem& inst, const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return Objective::linear(element_from_json(inst, j.at("c")));
  if (kind == "distance") return Objective::distance(element_from_json(inst, j.at("c")));
  if (kind == "max_affine") return Objective::max_affine(pieces_from_json(inst, j.at("pieces")));
  throw ParseError("unknown objective kind '" + kind + "'");
}

SpectralFunctionSpec spectral_fn_from_json(const json& j) {
  if (j.is_null()) return SpectralFunctionSpec::zero();
  const std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "zero") return SpectralFunctionSpec::zero();
  if (kind == "neg_logdet") return SpectralFunctionSpec::neg_logdet();
  if (kind == "linear") return SpectralFunctionSpec::linear(point_from_json(j.at("gradient")), j.contains("offset") ? read_num(j.at("offset")) : 0.0);
  if (kind == "custom_table") {
    std::vector<double> values;
    for (const auto& v : j.at("values")) values.push_back(read_num(v));
    return SpectralFunctionSpec::table(points_from_json(j.at("points")), std::move(values), j.value("tol", 1e-9));
  }
  throw ParseError("unknown spectral_fn kind '" + kind + "'");
}

Combiner combiner_from_json(const json& j) {
  if (j.is_null()) return Combiner::sum();
  const std::string kind = j.get<std::string>();
  if (kind == "sum") return Combiner::sum();
  if (kind == "product") return Combiner::product();
  throw ParseError("unknown combiner '" + kind + "'");
}

Problem problem_from_json(const json& j) {
  Problem p;
  p.inst = make_instance(j.at("instance"));
  p.objective = objective_from_json(*p.inst, j.at("objective"));
  p.set = set_from_json(*p.inst, j.at("set"));
  p.phi = spectral_fn_from_json(j.contains("spectral_fn") ? j.at("spectral_fn") : json());
  p.combiner = combiner_from_json(j.contains("combiner") ? j.at("combiner") : json());
  const std::string sense = j.value("sense", "max");
  if (sense != "min" && sense != "max") throw ParseError("sense must be 'min' or 'max'");
  p.sense = sense == "min" ? Sense::Min : Sense::Max;
  if (j.contains("tol")) p.options.tol = read_num(j.at("tol"));
  p.options.seed = j.value("seed", 42ULL);
  p.options.starts = j.value("starts", 32);
  return p;
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const CommutationCert& cert) {
  json out;
  out["verdict"] = cert.verdict;
  out["consistent"] = cert.consistent();
  out["tol"] = num(cert.tol);
  out["residual_inner"] = num(cert.residual_inner);
  out["residual_dist"] = num(cert.residual_dist);
  out["residual_addnorm"] = num(cert.residual_addnorm);
  out["residual_addvec"] = num(cert.residual_addvec);
  out["pass"] = {{"inner", cert.pass_inner},
                 {"dist", cert.pass_dist},
                 {"addnorm", cert.pass_addnorm},
                 {"addvec", cert.pass_addvec}};
  if (!cert.witness.is_null()) out["witness"] = cert.witness;
  return out;
}

json to_json(const AxiomReport& rep) {
  json out;
  out["instance"] = rep.instance;
  out["seed"] = rep.seed;
  out["samples"] = rep.n_samples;
  out["tol"] = num(rep.tol);
  out["a1_max"] = num(rep.a1_max);
  out["a2_min"] = num(rep.a2_min);
  out["a3_lambda_max"] = num(rep.a3_lambda_max);
  out["a3_inner_max"] = num(rep.a3_inner_max);
  out["a3_failures"] = rep.a3_failures;
  out["a3_gap_max"] = num(rep.a3_gap_max);
  if (rep.a3_failing_pair) {
    out["a3_failing_pair"] = {{"c", vec(rep.a3_failing_pair->first)}, {"q", vec(rep.a3_failing_pair->second)}};
  }
  out["homogeneity_max"] = num(rep.homogeneity_max);
  out["sandwich_min"] = num(rep.sandwich_min);
  out["lipschitz_min"] = num(rep.lipschitz_min);
  out["commute_rate"] = num(rep.commute_rate);
  out["pass"] = {{"a1", rep.a1_pass()},
                 {"a2", rep.a2_pass()},
                 {"a3", rep.a3_pass()},
                 {"homogeneity", rep.homogeneity_pass()},
                 {"sandwich", rep.sandwich_pass()},
                 {"all", rep.pass()}};
  return out;
}

json to_json(const CommutationSuiteReport& rep) {
  return {{"constructed", rep.n_constructed},
          {"generic", rep.n_generic},
          {"constructed_commuting", rep.constructed_commuting},
          {"generic_commuting", rep.generic_commuting},
          {"disagreements", rep.disagreements},
          {"witness_failures", rep.witness_failures}};
}

json to_json(const FtvnSystem& inst, const SolveReport& rep) {
  json out;
  out["feasible"] = rep.feasible;
  out["optimal_value"] = num(rep.optimal_value);
  out["attained"] = rep.attained;
  out["method"] = rep.method;
  out["iterations"] = rep.iterations;
  if (rep.optimizer_w.size()) out["optimizer_w"] = vec(rep.optimizer_w);
  if (rep.optimizer_v.size()) {
    out["optimizer_v"] = element_to_json(inst, rep.optimizer_v);
    out["value_v"] = num(rep.value_v);
    out["reduction_gap"] = num(rep.reduction_gap);
  }
  out["commutes_with"] = rep.commutes_with;
  if (rep.commutes_with != "none") out["commutation"] = to_json(rep.commutation);
  out["trace"] = rep.trace;
  return out;
}

}  // namespace ftvn::io
