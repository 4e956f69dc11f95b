#include "ftvn/paperpack.hpp"

#include "ftvn/io.hpp"
#include "ftvn/jacobi.hpp"

namespace ftvn {

namespace {

using io::json;
using io::num;
using io::vec;

json check(const std::string& name, bool pass, json detail) {
  detail["name"] = name;
  detail["pass"] = pass;
  return detail;
}

json subspace_counterexample(std::uint64_t seed) {
  const auto z = z_counterexample_instance();
  const AxiomReport rep = axiom_suite(*z, seed, 20, 1e-10);
  // c = (3,2,1) and q = lambda(-1,0,0) = (0,0,-1), both taken inside Z.
  const Element c = z->basis().transpose() * Eigen::Vector3d(3, 2, 1);
  const SpecPoint q = Eigen::Vector3d(0, 0, -1);
  const Witness w = z->a3_witness(c, q);
  const bool pass = rep.a1_pass() && rep.a2_pass() && !w && w.gap >= 0.1;
  return check("subspace_counterexample", pass,
               {{"a1_max", num(rep.a1_max)}, {"a2_min", num(rep.a2_min)}, {"witness_found", bool(w)},
                {"a3_gap", num(w.gap)}});
}

json rotation_commutes(std::uint64_t seed) {
  const auto rot = rotation_instance();
  const AxiomReport rep = axiom_suite(*rot, seed, 200);
  const Matrix& s = rot->rotation();
  const bool idempotent = (s * s - s).norm() <= 1e-12;
  const bool pass = rep.pass() && rep.commute_rate == 1.0 && !idempotent;
  return check("rotation_commutes", pass,
               {{"axioms_pass", rep.pass()}, {"commute_rate", num(rep.commute_rate)}, {"s_squared_is_s", idempotent}});
}

json rn2_operator_not_strong() {
  const RnAlgebra r2(2);
  const Element x = Eigen::Vector2d(1, 0);
  const Element y = Eigen::Vector2d(0, 1);
  const bool op = operator_commute_check(r2, x, y);
  const bool strong = strong_commute_check(r2, x, y).verdict;
  return check("rn2_operator_not_strong", op && !strong, {{"operator_commute", op}, {"strong_commute", strong}});
}

json det_sym2_roots() {
  const auto p = det_sym(2);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const SpecPoint l = hyp_lambda(p, svec(x));
  const bool pass = (l - Eigen::Vector2d(1, -1)).norm() <= 1e-10;
  return check("det_sym2_roots", pass, {{"lambda", vec(l)}});
}

json det_sym_complete(std::uint64_t seed) {
  const CompletenessReport rep = completeness_check(det_sym(3), seed, 50);
  return check("det_sym_complete", !rep.violation_found(), {{"min_ratio", num(rep.min_ratio)}});
}

json det_sym_isometric(std::uint64_t seed) {
  const HyperbolicSystem sys(det_sym(2));
  const IsometricReport rep = isometric_falsify(sys, seed, 10, 1e-6);
  return check("det_sym_isometric", rep.max_gap <= 1e-6,
               {{"max_gap", num(rep.max_gap)}, {"parallelogram_residual", num(rep.parallelogram_residual)}});
}

json flagship() {
  const SymAlgebra s2(2);
  Matrix c(2, 2);
  c << 1, 0, 0, -1;
  // q2 >= 0, q1 <= 2, q1 >= 1 (q1 >= q2 is implied by lambda(V)).
  std::vector<Halfspace> hs = {{Eigen::Vector2d(0, -1), 0.0}, {Eigen::Vector2d(1, 0), 2.0}, {Eigen::Vector2d(-1, 0), -1.0}};
  const SolveReport rep = reduce_solve(s2, Objective::linear(s2.from_matrix(c)), SpectralSetSpec::polyhedron(hs),
                                       SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  const bool pass = rep.feasible && std::abs(rep.optimal_value - 2.0) <= 1e-9 && rep.reduction_gap <= 1e-9;
  return check("flagship_sym2", pass,
               {{"value", num(rep.optimal_value)}, {"optimizer_w", vec(rep.optimizer_w)},
                {"optimizer_v", io::element_to_json(s2, rep.optimizer_v)}, {"commutes", rep.commutation.verdict}});
}

json abs_x1_envelopes() {
  const RnAlgebra r2(2);
  const std::vector<AffinePiece> h = {{Eigen::Vector2d(1, 0), 0.0}, {Eigen::Vector2d(-1, 0), 0.0}};
  const SpecPoint q = Eigen::Vector2d(1, -1);
  const double lower_star = convex_envelope_lower_star(r2, h, q);
  const LowerEnvelope lower = convex_envelope_lower(r2, [&](const Element& x) { return max_affine_value(r2, h, x); }, q);
  const double upper = convex_envelope_upper(r2, h, q);
  const bool pass = std::abs(lower_star + 1.0) <= 1e-12 && std::abs(lower.value - 1.0) <= 1e-12 && lower.exact;
  return check("abs_x1_envelopes", pass,
               {{"h_lower_star", num(lower_star)}, {"h_lower", num(lower.value)}, {"h_upper", num(upper)}});
}

json nonconvex_gradient_control() {
  const RnAlgebra r2(2);
  auto h = [](const Element& v) {
    const double x = v[0];
    const double y = v[1];
    return 0.5 * x * x - x + x * (y * y + y);
  };
  const Element a = Eigen::Vector2d(1, 0);
  const Element b = Eigen::Vector2d(0, 1);
  const Element ga = fd_gradient(h, a, 1e-6);
  const Element gb = fd_gradient(h, b, 1e-6);
  const bool op = operator_commute_check(r2, a, ga, 1e-6);
  const bool strong = strong_commute_check(r2, a, ga, 1e-6).verdict;
  const bool pass = std::abs(h(a) + 0.5) <= 1e-15 && std::abs(h(b)) <= 1e-15 && (ga - b).norm() <= 1e-8 &&
                    (gb - a).norm() <= 1e-8 && op && !strong;
  return check("nonconvex_gradient_control", pass,
               {{"h_a", num(h(a))}, {"h_b", num(h(b))}, {"grad_a", vec(ga)}, {"grad_b", vec(gb)},
                {"operator_commute", op}, {"strong_commute", strong}});
}

json orbit_interval(std::uint64_t seed) {
  const SymAlgebra s3(3);
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Element c = s3.sample(rng);
    const Element u = s3.sample(rng);
    const IntervalImage iv = interval_image(s3, c, SpectralSetSpec::orbit(u), split_seed(seed, k), 50);
    const double lo = lambda_tilde(s3, c).dot(s3.lambda(u));
    const double hi = s3.lambda(c).dot(s3.lambda(u));
    worst = std::max({worst, std::abs(iv.delta - lo), std::abs(iv.Delta - hi), iv.sampled_excess});
    if (!iv.lower_cert.verdict || !iv.upper_cert.verdict) worst = std::max(worst, 1.0);
  }
  return check("orbit_interval", worst <= 1e-9, {{"worst", num(worst)}});
}

json idempotent_orbit(std::uint64_t seed) {
  const RnAlgebra r3(3);
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const Element c = gaussian_vector(3, rng);
    for (Index k = 1; k <= 3; ++k) {
      const IdempotentOrbitMax m = idempotent_orbit_max(r3, c, k);
      // Idempotents of rank k in R^3 are the 0/1 vectors with k ones.
      double brute = -std::numeric_limits<double>::infinity();
      for (int mask = 0; mask < 8; ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
        double v = 0.0;
        for (int i = 0; i < 3; ++i) v += (mask >> i & 1) ? c[i] : 0.0;
        brute = std::max(brute, v);
      }
      worst = std::max({worst, std::abs(m.value - brute), std::abs(c.dot(m.idempotent) - brute)});
    }
  }
  return check("idempotent_orbit", worst <= 1e-12, {{"worst", num(worst)}});
}

json det_eigen_crosscheck(std::uint64_t seed) {
  const auto p = det_sym(3);
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Matrix g = Matrix::NullaryExpr(3, 3, [&] { return std::normal_distribution<double>()(rng); });
    const Matrix x = 0.5 * (g + g.transpose());
    const SpecPoint l = hyp_lambda(p, svec(x));
    const SpecPoint e = jacobi_eigen(x).values;
    worst = std::max(worst, (l - e).cwiseAbs().maxCoeff());
  }
  return check("det_eigen_crosscheck", worst <= 1e-8, {{"worst", num(worst)}});
}

}  // namespace

nlohmann::json run_paperpack(std::uint64_t seed) {
  json checks = json::array();
  checks.push_back(subspace_counterexample(split_seed(seed, 1)));
  checks.push_back(rotation_commutes(split_seed(seed, 2)));
  checks.push_back(rn2_operator_not_strong());
  checks.push_back(det_sym2_roots());
  checks.push_back(det_sym_complete(split_seed(seed, 3)));
  checks.push_back(det_sym_isometric(split_seed(seed, 4)));
  checks.push_back(flagship());
  checks.push_back(abs_x1_envelopes());
  checks.push_back(nonconvex_gradient_control());
  checks.push_back(orbit_interval(split_seed(seed, 5)));
  checks.push_back(idempotent_orbit(split_seed(seed, 6)));
  checks.push_back(det_eigen_crosscheck(split_seed(seed, 7)));
  bool all = true;
  for (const auto& c : checks) all = all && c.at("pass").get<bool>();
  return {{"checks", checks}, {"pass", all}};
}

}  // namespace ftvn
