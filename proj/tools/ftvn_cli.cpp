#include "ftvn/io.hpp"
#include "ftvn/paperpack.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace ftvn;
using io::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kPropertyFailure = 2, kInfeasible = 3 };

struct Common {
  std::string out;
  bool record_time = false;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw io::ParseError("'" + path + "': " + e.what());
  }
}

void emit(const Common& common, const std::string& command, const std::string& input, json result,
          std::chrono::steady_clock::time_point start) {
  json manifest = {{"command", command},
                   {"input", input},
                   {"seed", common.seed},
                   {"tol", io::num(common.tol)},
                   {"output", common.out.empty() ? "-" : common.out}};
  if (common.record_time) {
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const json report = {{"schema", "ftvn/1"}, {"manifest", manifest}, {"result", std::move(result)}};
  const std::string text = report.dump(2) + "\n";
  if (common.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(common.out);
  if (!out || !(out << text)) throw io::ParseError("cannot write '" + common.out + "'");
}

int cmd_check(const Common& common, const std::string& instance, int samples, int pairs, json& result) {
  const SystemPtr inst = io::make_instance(instance);
  const AxiomReport rep = axiom_suite(*inst, common.seed, samples, common.tol);
  result["axioms"] = io::to_json(rep);
  bool ok = rep.pass();
  if (pairs > 0) {
    const CommutationSuiteReport cs = commutation_suite(*inst, split_seed(common.seed, 1), pairs);
    result["commutation"] = io::to_json(cs);
    ok = ok && cs.disagreements == 0;
  }
  result["pass"] = ok;
  return ok ? kOk : kPropertyFailure;
}

int cmd_solve(const Common& common, const json& doc, json& result) {
  const io::Problem p = io::problem_from_json(doc);
  SolveOptions opts = p.options;
  if (doc.contains("seed") == false) opts.seed = common.seed;
  const SolveReport rep = reduce_solve(*p.inst, p.objective, p.set, p.phi, p.combiner, p.sense, opts);
  result = io::to_json(*p.inst, rep);
  result["instance"] = p.inst->name();
  result["sense"] = p.sense == Sense::Max ? "max" : "min";
  if (!rep.feasible) return kInfeasible;
  const bool certified = rep.commutes_with == "none" || !rep.attained || rep.commutation.verdict;
  return certified ? kOk : kPropertyFailure;
}

int cmd_envelope(const json& doc, std::uint64_t seed, json& result) {
  const SystemPtr inst = io::make_instance(doc.at("instance"));
  const auto pieces = io::pieces_from_json(*inst, doc.at("pieces"));
  const SpecPoint q = io::point_from_json(doc.at("q"));
  inst->require_point(q, "q");
  const int budget = doc.value("budget", 2000);
  const double upper = convex_envelope_upper(*inst, pieces, q);
  const double lower_star = convex_envelope_lower_star(*inst, pieces, q);
  const LowerEnvelope lower =
      convex_envelope_lower(*inst, [&](const Element& x) { return max_affine_value(*inst, pieces, x); }, q, budget, seed);
  result = {{"instance", inst->name()},
            {"q", io::vec(q)},
            {"h_upper", io::num(upper)},
            {"h_lower_star", io::num(lower_star)},
            {"h_lower", io::num(lower.value)},
            {"h_lower_exact", lower.exact},
            {"h_lower_argmin", io::element_to_json(*inst, lower.argmin)},
            {"evaluations", lower.evaluations}};
  const double slack = 1e-9 * (1.0 + std::abs(upper));
  const bool sandwich = lower_star <= lower.value + slack && lower.value <= upper + slack;
  result["sandwich"] = sandwich;
  return sandwich ? kOk : kPropertyFailure;
}

int cmd_hausdorff(const json& doc, json& result) {
  const SystemPtr inst = io::make_instance(doc.at("instance"));
  const SpectralSetSpec e = io::set_from_json(*inst, doc.at("E"));
  const SpectralSetSpec f = io::set_from_json(*inst, doc.at("F"));
  const double spectral = hausdorff_spectral(*inst, e, f);
  result = {{"instance", inst->name()}, {"spectral", io::num(spectral)}};
  if (auto ambient = hausdorff_ambient(*inst, e, f)) {
    result["ambient"] = io::num(*ambient);
    const bool equal = std::abs(*ambient - spectral) <= 1e-10 * (1.0 + spectral);
    result["equal"] = equal;
    return equal ? kOk : kPropertyFailure;
  }
  return kOk;
}

VectorField field_from_json(const FtvnSystem& inst, const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return [](const Element& x) { return x; };
  if (kind == "constant") {
    const Element c = io::element_from_json(inst, j.at("c"));
    return [c](const Element&) { return c; };
  }
  if (kind == "affine") {
    const Matrix m = [&] {
      const auto& rows = j.at("matrix");
      Matrix out(static_cast<Index>(rows.size()), inst.dim_v());
      for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = io::point_from_json(rows[i]).transpose();
      return out;
    }();
    if (m.rows() != inst.dim_v()) throw DimensionMismatch("affine field: matrix must be dim_v x dim_v");
    const Element shift = j.contains("shift") ? io::element_from_json(inst, j.at("shift")) : Element(Element::Zero(inst.dim_v()));
    return [m, shift](const Element& x) { return Element(m * x + shift); };
  }
  throw io::ParseError("unknown field kind '" + kind + "'");
}

int cmd_vi(const Common& common, const json& doc, json& result) {
  const SystemPtr inst = io::make_instance(doc.at("instance"));
  const SpectralSetSpec set = io::set_from_json(*inst, doc.at("set"));
  const Element a = io::element_from_json(*inst, doc.at("a"));
  const VectorField g = field_from_json(*inst, doc.at("G"));
  const ViReport rep = vi_commutation_check(*inst, g, set, a, common.tol, common.seed, doc.value("samples", 1000));
  result = {{"instance", inst->name()},
            {"a_in_set", rep.a_in_set},
            {"vi_residual", io::num(rep.vi_residual)},
            {"residual_exact", rep.residual_exact},
            {"solves_vi", rep.residual_exact && rep.a_in_set && rep.vi_residual >= -common.tol},
            {"commutation", io::to_json(rep.commutation)},
            {"contract_holds", rep.contract_holds}};
  if (rep.worst_x.size()) result["worst_x"] = io::element_to_json(*inst, rep.worst_x);
  return rep.contract_holds ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-set optimization through eigenvalue-map reductions"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out,-o", common.out, "Write the report here instead of stdout");
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_option("--tol", common.tol, "Tolerance");
    sub->add_flag("--record-time", common.record_time, "Include wall time in the manifest");
  };

  std::string instance;
  int samples = 1000;
  int pairs = 0;
  auto* check = app.add_subcommand("check", "Run the axiom suite on an instance");
  check->add_option("--instance,-i", instance, "Instance spec, e.g. rn:3, sym:2, svd:3x2, rot90")->required();
  check->add_option("--samples,-n", samples, "Number of samples")->check(CLI::PositiveNumber);
  check->add_option("--commute-pairs", pairs, "Also run the commutation-equivalence suite");
  add_common(check);

  std::string input;
  auto* solve = app.add_subcommand("solve", "Solve a spectral problem file");
  solve->add_option("problem", input, "Problem JSON")->required();
  add_common(solve);

  auto* pack = app.add_subcommand("paperpack", "Run the regression pack of published examples");
  add_common(pack);

  auto* env = app.add_subcommand("envelope", "Evaluate the spectral envelopes of a max-affine function");
  env->add_option("input", input, "JSON with instance, pieces, q")->required();
  add_common(env);

  auto* haus = app.add_subcommand("hausdorff", "Hausdorff distance of two finite spectral sets");
  haus->add_option("input", input, "JSON with instance, E, F")->required();
  add_common(haus);

  auto* vi = app.add_subcommand("vi", "Variational-inequality commutation check");
  vi->add_option("input", input, "JSON with instance, set, a, G")->required();
  add_common(vi);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  json result;
  int code = kOk;
  std::string command;
  try {
    if (*check) {
      command = "check";
      input = instance;
      code = cmd_check(common, instance, samples, pairs, result);
    } else if (*solve) {
      command = "solve";
      code = cmd_solve(common, read_json_file(input), result);
    } else if (*pack) {
      command = "paperpack";
      result = run_paperpack(common.seed);
      code = result.at("pass").get<bool>() ? kOk : kPropertyFailure;
    } else if (*env) {
      command = "envelope";
      code = cmd_envelope(read_json_file(input), common.seed, result);
    } else if (*haus) {
      command = "hausdorff";
      code = cmd_hausdorff(read_json_file(input), result);
    } else if (*vi) {
      command = "vi";
      code = cmd_vi(common, read_json_file(input), result);
    }
    emit(common, command, input, std::move(result), start);
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}
