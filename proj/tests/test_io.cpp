#include <doctest.h>

#include "ftvn/io.hpp"

using namespace ftvn;
using io::json;

TEST_CASE("registry builds every instance kind") {
  for (const char* spec : {"rn:3", "sym:2", "spin:4", "svd:3x2", "rot90", "z-counterexample",
                           "product:rn:2+sym:2+spin:3", "hyp:coordinate_product:3", "hyp:det_sym:2"}) {
    CAPTURE(spec);
    const SystemPtr inst = io::make_instance(std::string(spec));
    REQUIRE(inst);
    CHECK(inst->dim_v() > 0);
  }
  CHECK(io::make_instance(std::string("spin:2"))->dim_v() == 3);
  CHECK(io::make_instance(std::string("product:rn:2+sym:2+spin:3"))->dim_w() == 6);
  CHECK_THROWS_AS(io::make_instance(std::string("foo:3")), io::ParseError);
  CHECK_THROWS_AS(io::make_instance(std::string("rn:x")), io::ParseError);
  CHECK_THROWS_AS(io::make_instance(std::string("product:rot90")), io::ParseError);
  CHECK_THROWS(io::make_instance(std::string("svd:2x3")));
}

TEST_CASE("custom polynomial instances from JSON") {
  const json j = {{"kind", "hyp"},
                  {"poly", {{"kind", "custom_monomials"}, {"n", 2}, {"e", {1, 1}}, {"monomials", {{{"coef", 1}, {"powers", {1, 1}}}}}}}};
  const SystemPtr inst = io::make_instance(j);
  CHECK(inst->dim_w() == 2);
  CHECK((inst->lambda(Eigen::Vector2d(1, 3)) - Eigen::Vector2d(3, 1)).norm() <= 1e-9);
}

TEST_CASE("element JSON round trips") {
  const auto sym = io::make_instance(std::string("sym:2"));
  const Element x = io::element_from_json(*sym, json::parse(R"({"kind":"sym","n":2,"data":[[0,1],[1,0]]})"));
  CHECK(x == Element(Eigen::Vector4d(0, 1, 1, 0)));
  CHECK(io::element_from_json(*sym, io::element_to_json(*sym, x)) == x);
  CHECK_THROWS_AS(io::element_from_json(*sym, json::parse(R"({"kind":"sym","n":2,"data":[[0,1],[2,0]]})")), ContractError);

  const auto spin = io::make_instance(std::string("spin:2"));
  const Element s = io::element_from_json(*spin, json::parse(R"({"kind":"spin","x0":1,"xbar":[1,0]})"));
  CHECK(s == Element(Eigen::Vector3d(1, 1, 0)));
  CHECK(io::element_from_json(*spin, io::element_to_json(*spin, s)) == s);

  const auto rect = io::make_instance(std::string("svd:3x2"));
  const Element r = io::element_from_json(*rect, json::parse(R"({"kind":"rect","m":3,"n":2,"data":[[1,2],[3,4],[5,6]]})"));
  CHECK(io::element_from_json(*rect, io::element_to_json(*rect, r)) == r);

  const auto prod = io::make_instance(std::string("product:rn:2+spin:2"));
  const Element p = io::element_from_json(
      *prod, json::parse(R"({"kind":"product","parts":[{"kind":"rn","data":[1,2]},{"kind":"spin","x0":0,"xbar":[3,4]}]})"));
  CHECK(p == Element((Eigen::VectorXd(5) << 1, 2, 0, 3, 4).finished()));
  CHECK(io::element_from_json(*prod, io::element_to_json(*prod, p)) == p);

  const auto z = io::make_instance(std::string("z-counterexample"));
  const Element zc = io::element_from_json(*z, json::parse(R"({"kind":"rn","data":[3,2,1]})"));
  CHECK(zc.size() == 2);
  CHECK_THROWS_AS(io::element_from_json(*z, json::parse(R"({"kind":"rn","data":[0,0,1]})")), ContractError);

  const auto det = io::make_instance(std::string("hyp:det_sym:2"));
  const Element d = io::element_from_json(*det, json::parse(R"({"kind":"sym","n":2,"data":[[0,1],[1,0]]})"));
  CHECK((det->lambda(d) - Eigen::Vector2d(1, -1)).norm() <= 1e-10);

  CHECK_THROWS_AS(io::element_from_json(*sym, json::parse("[1,2,3]")), DimensionMismatch);
}

TEST_CASE("numbers carry hexfloat and decimal") {
  const json n = io::num(0.1);
  CHECK(n["hex"] == "0x1.999999999999ap-4");
  CHECK(n["dec"].get<double>() == 0.1);
  CHECK(io::read_num(n) == 0.1);
  CHECK(io::num(-std::numeric_limits<double>::infinity())["dec"] == "-inf");
  CHECK(io::read_num(json("-inf")) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("problem files") {
  const json j = json::parse(R"({
    "instance": "sym:2",
    "objective": {"kind": "linear", "c": {"kind": "sym", "n": 2, "data": [[1, 0], [0, -1]]}},
    "spectral_fn": {"kind": "zero"},
    "combiner": "sum",
    "set": {"kind": "polyhedron", "halfspaces": [
      {"normal": [0, -1], "offset": 0}, {"normal": [1, 0], "offset": 2}, {"normal": [-1, 0], "offset": -1}]},
    "sense": "max", "tol": 1e-8, "seed": 42
  })");
  const io::Problem p = io::problem_from_json(j);
  const SolveReport rep = reduce_solve(*p.inst, p.objective, p.set, p.phi, p.combiner, p.sense, p.options);
  CHECK(rep.optimal_value == doctest::Approx(2.0));
  const json out = io::to_json(*p.inst, rep);
  CHECK(out["commutation"]["verdict"] == true);
  CHECK(out["optimizer_v"]["kind"] == "sym");

  json bad = j;
  bad["sense"] = "sideways";
  CHECK_THROWS_AS(io::problem_from_json(bad), io::ParseError);
  bad = j;
  bad["set"]["halfspaces"][0]["normal"] = {1, 2, 3};
  CHECK_THROWS_AS(io::problem_from_json(bad), DimensionMismatch);
}
