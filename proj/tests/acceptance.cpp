// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "ftvn/io.hpp"
#include "ftvn/paperpack.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ftvn;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("criterion %2d: %s  %s [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Every coordinate permutation of p, by std::next_permutation over indices.
std::vector<Eigen::VectorXd> permutations(const Eigen::VectorXd& p) {
  std::vector<int> idx(static_cast<std::size_t>(p.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<Eigen::VectorXd> out;
  do {
    Eigen::VectorXd x(p.size());
    for (std::size_t i = 0; i < idx.size(); ++i) x[static_cast<Index>(i)] = p[idx[i]];
    out.push_back(x);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// lambda^{-1}(Q) in R^n by brute force: every x whose sorted copy is in Q
// (or, for permutation-invariant Q, every permutation of every point).
std::vector<Eigen::VectorXd> preimage(const std::vector<Eigen::VectorXd>& q, bool perm_invariant) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : q) {
    Eigen::VectorXd s = p;
    std::sort(s.data(), s.data() + s.size(), std::greater<>());
    if (!perm_invariant && (s - p).cwiseAbs().maxCoeff() > 0.0) continue;
    for (const auto& x : permutations(s)) {
      const bool seen = std::any_of(out.begin(), out.end(), [&](const Eigen::VectorXd& y) { return (y - x).cwiseAbs().maxCoeff() <= 1e-12; });
      if (!seen) out.push_back(x);
    }
  }
  return out;
}

double hausdorff_brute(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  auto directed = [](const auto& from, const auto& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::vector<SystemPtr> exact_instances() {
  std::vector<SystemPtr> out;
  for (const char* s : {"rn:3", "rn:8", "sym:3", "sym:8", "spin:2", "spin:16", "product:rn:2+sym:2+spin:3",
                        "svd:3x2", "svd:6x6", "rot90"}) {
    out.push_back(io::make_instance(std::string(s)));
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion1() {
  std::vector<std::string> specs;
  for (int n = 1; n <= 8; ++n) specs.push_back("rn:" + std::to_string(n));
  for (int n = 1; n <= 8; ++n) specs.push_back("sym:" + std::to_string(n));
  for (int n = 1; n <= 16; ++n) specs.push_back("spin:" + std::to_string(n));
  specs.push_back("product:rn:2+sym:2+spin:3");
  specs.push_back("product:sym:3+spin:4+rn:1");
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= m; ++n) specs.push_back("svd:" + std::to_string(m) + "x" + std::to_string(n));
  specs.push_back("rot90");

  const auto start = std::chrono::steady_clock::now();
  double a1 = 0, a2 = 0, hom = 0, a3 = 0;
  int a3_fail = 0;
  std::string worst;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SystemPtr inst = io::make_instance(specs[i]);
    const AxiomReport r = axiom_suite(*inst, split_seed(1, i), 1000, 1e-8);
    a1 = std::max(a1, r.a1_max);
    a2 = std::max(a2, -r.a2_min);
    hom = std::max(hom, r.homogeneity_max);
    a3 = std::max({a3, r.a3_lambda_max, r.a3_inner_max});
    a3_fail += r.a3_failures;
    if (!(r.a1_pass() && r.a2_pass() && r.homogeneity_pass() && r.a3_pass())) worst = specs[i];
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = a1 <= 1e-8 && a2 <= 1e-8 && hom <= 1e-8 && a3 <= 1e-8 && a3_fail == 0 && secs < 30.0;
  report(1, pass, "axiom suites on " + std::to_string(specs.size()) + " instances, 1000 samples each",
         "A1 " + sci(a1) + ", A2 " + sci(a2) + ", homog " + sci(hom) + ", A3 " + sci(a3) + ", failures " +
             std::to_string(a3_fail) + ", " + sci(secs) + " s" + (worst.empty() ? "" : ", worst " + worst));
}

void criterion2() {
  const auto z = z_counterexample_instance();
  const AxiomReport r = axiom_suite(*z, 2, 200, 1e-10);
  const bool pass = r.a1_pass() && r.a2_pass() && r.a3_gap_max >= 0.1 && r.a3_failing_pair.has_value();
  report(2, pass, "subspace counterexample: A1/A2 hold, A3 fails",
         "A1 " + sci(r.a1_max) + ", A2 " + sci(r.a2_min) + ", A3 failures " + std::to_string(r.a3_failures) +
             ", max certified gap " + sci(r.a3_gap_max));
}

void criterion3() {
  double excess = 0, gap = 0;
  bool sampling = true;
  for (const auto& inst : exact_instances()) {
    const OrbitOptimalityReport r = orbit_optimality_suite(*inst, 3, 100, 1000);
    excess = std::max(excess, r.max_excess);
    gap = std::max(gap, r.max_witness_gap);
    sampling = sampling && r.orbit_sampling_available;
  }
  report(3, excess <= 1e-8 && gap <= 1e-8 && sampling, "orbit optimality, 100 pairs x 1000 orbit samples per instance",
         "max excess " + sci(excess) + ", max witness gap " + sci(gap));
}

void criterion4() {
  int disagreements = 0, constructed = 0, constructed_commuting = 0, generic = 0, failures_w = 0;
  for (const auto& inst : exact_instances()) {
    const CommutationSuiteReport r = commutation_suite(*inst, 4, 1000, 1e-7);
    disagreements += r.disagreements;
    constructed += r.n_constructed;
    constructed_commuting += r.constructed_commuting;
    generic += r.n_generic;
    failures_w += r.witness_failures;
  }
  const bool pass = disagreements == 0 && failures_w == 0 && constructed_commuting == constructed;
  report(4, pass, "four commutation tests agree",
         std::to_string(constructed) + " constructed + " + std::to_string(generic) + " generic pairs, " +
             std::to_string(disagreements) + " disagreements");
}

void criterion5() {
  Rng rng(5);
  double worst = 0.0;
  int attained_uncertified = 0, solves = 0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t % 4;
    RnAlgebra rn(n);
    const bool perm_inv = t % 2 == 0;
    const int npts = 1 + static_cast<int>(rng() % 4);
    std::vector<Eigen::VectorXd> q;
    for (int k = 0; k < npts; ++k) {
      Eigen::VectorXd p = gaussian_vector(n, rng).array().round();  // integer points create ties
      if (!perm_inv && k % 2 == 0) std::sort(p.data(), p.data() + n, std::greater<>());
      q.push_back(p);
    }
    std::vector<AffinePiece> pieces;
    const int npieces = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < npieces; ++k) pieces.push_back({gaussian_vector(n, rng), std::normal_distribution<double>()(rng)});

    // Tabulated phi on every sorted point of Q; positive so the product combiner is monotone.
    std::vector<Eigen::VectorXd> tab_pts;
    std::vector<double> tab_vals;
    for (const auto& p : q) {
      Eigen::VectorXd s = p;
      std::sort(s.data(), s.data() + n, std::greater<>());
      tab_pts.push_back(s);
      tab_vals.push_back(0.5 + std::abs(std::normal_distribution<double>()(rng)));
    }
    const auto phi = SpectralFunctionSpec::table(tab_pts, tab_vals);
    const bool use_product = t % 3 == 0;
    const Combiner comb = use_product ? Combiner::product() : Combiner::sum();
    const auto set = SpectralSetSpec::finite(q, perm_inv);

    const auto pre = preimage(q, perm_inv);
    for (Sense sense : {Sense::Max, Sense::Min}) {
      // Brute force directly in V. With the product combiner, h must stay
      // positive for strict monotonicity; shift it by a constant when needed.
      double shift = 0.0;
      if (use_product) {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& x : pre) lo = std::min(lo, max_affine_value(rn, pieces, x));
        if (!pre.empty() && lo <= 0.5) shift = 0.5 - lo;
      }
      std::vector<AffinePiece> shifted = pieces;
      for (auto& p : shifted) p.alpha += shift;
      const auto sobj = Objective::max_affine(shifted);

      double brute = sense == Sense::Max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (const auto& x : pre) {
        Eigen::VectorXd s = x;
        std::sort(s.data(), s.data() + n, std::greater<>());
        const double v = comb(max_affine_value(rn, shifted, x), phi(s));
        brute = sense == Sense::Max ? std::max(brute, v) : std::min(brute, v);
      }
      const SolveReport r = reduce_solve(rn, sobj, set, phi, comb, sense);
      ++solves;
      if (pre.empty()) {
        if (r.feasible) worst = std::max(worst, 1.0);
        continue;
      }
      worst = std::max({worst, std::abs(r.optimal_value - brute), r.reduction_gap});
      if (r.attained && r.commutes_with != "none" && !r.commutation.verdict) ++attained_uncertified;
    }
  }
  report(5, worst <= 1e-9 && attained_uncertified == 0, "reduction identity vs brute force, 50 finite specs",
         std::to_string(solves) + " solves, max error " + sci(worst) + ", attained without certificate " +
             std::to_string(attained_uncertified));
}

void criterion6() {
  SymAlgebra s2(2);
  Matrix c(2, 2);
  c << 1, 0, 0, -1;
  const std::vector<Halfspace> hs = {{Eigen::Vector2d(0, -1), 0.0}, {Eigen::Vector2d(1, 0), 2.0}, {Eigen::Vector2d(-1, 0), -1.0}};
  const SolveReport r = reduce_solve(s2, Objective::linear(s2.from_matrix(c)), SpectralSetSpec::polyhedron(hs),
                                     SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  // Independent vertex enumeration over the constraints plus q1 >= q2.
  std::vector<Halfspace> all = hs;
  all.push_back({Eigen::Vector2d(-1, 1), 0.0});
  const Eigen::Vector2d d(1, -1);  // lambda(C)
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      Eigen::Matrix2d m;
      m.row(0) = all[i].normal.transpose();
      m.row(1) = all[j].normal.transpose();
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d v = m.inverse() * Eigen::Vector2d(all[i].offset, all[j].offset);
      bool ok = true;
      for (const auto& h : all) ok = ok && h.normal.dot(v) <= h.offset + 1e-12;
      if (ok) best = std::max(best, d.dot(v));
    }
  const bool pass = std::abs(r.optimal_value - 2.0) <= 1e-9 && std::abs(best - 2.0) <= 1e-12 && r.reduction_gap <= 1e-9;
  report(6, pass, "flagship Sym(2) problem",
         "engine " + sci(r.optimal_value) + " via " + r.method + ", vertex enumeration " + sci(best) +
             ", lifted value " + sci(r.value_v));
}

void criterion7() {
  RnAlgebra r2(2);
  std::vector<std::string> bad;

  // |x1| envelopes at q = (1,-1).
  const std::vector<AffinePiece> abs1 = {{Eigen::Vector2d(1, 0), 0.0}, {Eigen::Vector2d(-1, 0), 0.0}};
  const double hs = convex_envelope_lower_star(r2, abs1, Eigen::Vector2d(1, -1));
  const double hss = convex_envelope_lower(r2, [&](const Element& x) { return max_affine_value(r2, abs1, x); }, Eigen::Vector2d(1, -1)).value;
  if (std::abs(hs + 1.0) > 1e-12 || std::abs(hss - 1.0) > 1e-12) bad.push_back("abs");

  // Nonconvex two-point example.
  auto h = [](const Element& v) { return 0.5 * v[0] * v[0] - v[0] + v[0] * (v[1] * v[1] + v[1]); };
  const Element a = Eigen::Vector2d(1, 0), b = Eigen::Vector2d(0, 1);
  const Element ga = fd_gradient(h, a, 1e-6), gb = fd_gradient(h, b, 1e-6);
  if (std::abs(h(a) + 0.5) > 1e-15 || (ga - b).norm() > 1e-8 || (gb - a).norm() > 1e-8 ||
      !operator_commute_check(r2, a, ga) || strong_commute_check(r2, a, ga).verdict) {
    bad.push_back("two-point");
  }

  // Idempotent orbit in R^3 against 0/1 enumeration.
  RnAlgebra r3(3);
  Rng rng(7);
  double idem = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Element c = gaussian_vector(3, rng);
    for (Index k = 1; k <= 3; ++k) {
      double brute = -1e300;
      for (const auto& e : permutations((Eigen::VectorXd(3) << (k >= 1), (k >= 2), (k >= 3)).finished().cast<double>()))
        brute = std::max(brute, c.dot(e));
      idem = std::max(idem, std::abs(idempotent_orbit_max(r3, c, k).value - brute));
    }
  }
  if (idem > 1e-12) bad.push_back("idempotent");

  // Determinant polynomial against the symmetric eigen-solver.
  const auto p = det_sym(3);
  double det = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Matrix g = Matrix::NullaryExpr(3, 3, [&] { return std::normal_distribution<double>()(rng); });
    const Matrix x = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    det = std::max(det, (hyp_lambda(p, svec(x)) - es.eigenvalues().reverse()).cwiseAbs().maxCoeff());
  }
  if (det > 1e-8) bad.push_back("det");

  std::string detail = "h_* " + sci(hs) + ", h_** " + sci(hss) + ", h(1,0) " + sci(h(a)) + ", idempotent err " +
                       sci(idem) + ", det err " + sci(det);
  report(7, bad.empty(), "published example values", detail);
}

void criterion8() {
  double prefix = 0.0, trace = 0.0;
  for (const char* s : {"rn:5", "sym:4", "spin:5", "product:rn:2+sym:2+spin:3"}) {
    const auto alg = std::dynamic_pointer_cast<const JordanAlgebra>(io::make_instance(std::string(s)));
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
      const MajorizationReport r = majorization_check(*alg, alg->sample(rng), alg->sample(rng), 1e-9);
      for (double g : r.prefix_gaps) prefix = std::min(prefix, g);
      trace = std::max(trace, std::abs(r.trace_gap));
    }
  }
  report(8, prefix >= -1e-9 && trace <= 1e-9, "majorization on 1000 pairs per Jordan instance",
         "min prefix gap " + sci(prefix) + ", max trace gap " + sci(trace));
}

void criterion9() {
  Rng rng(9);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 1 + t % 5;
    RnAlgebra rn(n);
    auto random_set = [&] {
      std::vector<Eigen::VectorXd> pts;
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < k; ++i) pts.push_back(gaussian_vector(n, rng));
      return pts;
    };
    const auto e = random_set();
    const auto f = random_set();
    const double ambient = hausdorff_brute(preimage(e, true), preimage(f, true));
    const double spectral = hausdorff_spectral(rn, SpectralSetSpec::finite(e, true), SpectralSetSpec::finite(f, true));
    worst = std::max(worst, std::abs(ambient - spectral));
  }
  report(9, worst <= 1e-10, "Hausdorff equality on 50 permutation-invariant pairs", "max difference " + sci(worst));
}

void criterion10() {
  Rng rng(10);
  int sol_commute = 0, nonsol_negative = 0, nonsol = 0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t % 4;
    RnAlgebra rn(n);
    std::vector<Eigen::VectorXd> q = {gaussian_vector(n, rng)};
    if (t % 2) q.push_back(gaussian_vector(n, rng));
    const auto set = SpectralSetSpec::finite(q, true);
    const auto pre = preimage(q, true);
    const Element c = gaussian_vector(n, rng);
    // Solution: argmin of <c,x> over E by enumeration.
    const auto best = std::min_element(pre.begin(), pre.end(), [&](const auto& x, const auto& y) { return c.dot(x) < c.dot(y); });
    const ViReport sol = vi_commutation_check(rn, [&](const Element&) { return c; }, set, *best);
    if (sol.residual_exact && sol.vi_residual >= -1e-8 && sol.commutation.verdict) ++sol_commute;
    // Non-solution: any element strictly above the minimum.
    for (const auto& x : pre) {
      if (c.dot(x) > c.dot(*best) + 1e-6) {
        ++nonsol;
        if (vi_commutation_check(rn, [&](const Element&) { return c; }, set, x).vi_residual < 0.0) ++nonsol_negative;
        break;
      }
    }
  }
  const bool pass = sol_commute == 50 && nonsol == 50 && nonsol_negative == 50;
  report(10, pass, "VI commutation",
         std::to_string(sol_commute) + "/50 solutions commute, " + std::to_string(nonsol_negative) + "/" +
             std::to_string(nonsol) + " non-solutions have negative residual");
}

std::string run_cli(const std::string& cli, const std::string& out) {
  const std::string cmd = "\"" + cli + "\" paperpack --seed 42 --out \"" + out + "\"";
  if (std::system(cmd.c_str()) != 0) return "<cli failed>";
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion11(const std::string& cli) {
  const std::string a = run_paperpack(42).dump();
  const std::string b = run_paperpack(42).dump();
  bool pass = a == b;
  std::string detail = std::string("in-process runs ") + (a == b ? "identical" : "differ");
  if (!cli.empty()) {
    // Same --out both times: the manifest records the output path.
    const std::string x = run_cli(cli, "acceptance_paperpack.json");
    const std::string y = run_cli(cli, "acceptance_paperpack.json");
    const bool same = x == y && x.rfind("<cli", 0) != 0;
    pass = pass && same;
    detail += std::string(", CLI runs ") + (same ? "byte-identical (" + std::to_string(x.size()) + " bytes)" : "differ");
  }
  report(11, pass, "paperpack determinism", detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8,
                                                        criterion9, criterion10, [&] { criterion11(cli); }};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, "threw", e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
