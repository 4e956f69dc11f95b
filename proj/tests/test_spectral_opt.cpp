#include <doctest.h>

#include "ftvn/eja.hpp"
#include "ftvn/envelope.hpp"
#include "ftvn/lp.hpp"
#include "ftvn/nds.hpp"
#include "ftvn/optimality.hpp"
#include "ftvn/projection.hpp"

#include <Eigen/Eigenvalues>

using namespace ftvn;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Element v2(double a, double b) { return Eigen::Vector2d(a, b); }

const double kInf = std::numeric_limits<double>::infinity();

// Flagship set: q2 >= 0, 1 <= q1 <= 2.
std::vector<Halfspace> flagship_halfspaces() {
  return {{Eigen::Vector2d(0, -1), 0.0}, {Eigen::Vector2d(1, 0), 2.0}, {Eigen::Vector2d(-1, 0), -1.0}};
}

// Oracle for 2-D polyhedra: best objective over all pairwise line intersections.
double vertex_max_2d(const std::vector<Halfspace>& hs, const Eigen::Vector2d& d) {
  double best = -kInf;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      Eigen::Matrix2d a;
      a.row(0) = hs[i].normal.transpose();
      a.row(1) = hs[j].normal.transpose();
      if (std::abs(a.determinant()) < 1e-12) continue;
      const Eigen::Vector2d v = a.inverse() * Eigen::Vector2d(hs[i].offset, hs[j].offset);
      bool ok = true;
      for (const auto& h : hs) ok = ok && h.normal.dot(v) <= h.offset + 1e-12;
      if (ok) best = std::max(best, d.dot(v));
    }
  }
  return best;
}

// Oracle for isotonic projection: best block-average over all consecutive partitions.
Eigen::VectorXd isotonic_oracle(const Eigen::VectorXd& y) {
  const Index n = y.size();
  Eigen::VectorXd best;
  double best_d = kInf;
  for (unsigned cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    Eigen::VectorXd z(n);
    Index start = 0;
    for (Index i = 0; i < n; ++i) {
      if (i == n - 1 || (cuts >> i & 1u)) {
        const double avg = y.segment(start, i - start + 1).mean();
        z.segment(start, i - start + 1).setConstant(avg);
        start = i + 1;
      }
    }
    if (is_nonincreasing(z, 1e-15) && (z - y).norm() < best_d) {
      best_d = (z - y).norm();
      best = z;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("simplex against vertex enumeration") {
  const auto hs = flagship_halfspaces();
  Matrix a(3, 2);
  Eigen::VectorXd b(3);
  for (int i = 0; i < 3; ++i) {
    a.row(i) = hs[i].normal.transpose();
    b[i] = hs[i].offset;
  }
  // The flagship set is unbounded in q2 without the order cone; add q2 <= q1.
  Matrix a2(4, 2);
  a2 << a, Eigen::RowVector2d(-1, 1);
  Eigen::VectorXd b2(4);
  b2 << b, 0.0;
  std::vector<Halfspace> hs2 = hs;
  hs2.push_back({Eigen::Vector2d(-1, 1), 0.0});

  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d d = gaussian_vector(2, rng);
    const LpResult lp = solve_lp(d, a2, b2);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.value == doctest::Approx(vertex_max_2d(hs2, d)).epsilon(1e-12));
  }
  CHECK(solve_lp(Eigen::Vector2d(0, 1), a, b).status == LpStatus::Unbounded);

  Matrix inf(2, 1);
  inf << 1, -1;
  CHECK(solve_lp(Eigen::VectorXd::Ones(1), inf, Eigen::Vector2d(-1, 0)).status == LpStatus::Infeasible);
}

TEST_CASE("simplex on a degenerate LP terminates") {
  // Many constraints through the same vertex.
  Matrix a(6, 2);
  a << 1, 0, 0, 1, 1, 1, 2, 1, 1, 2, -1, -1;
  Eigen::VectorXd b(6);
  b << 1, 1, 2, 3, 3, 0;
  const LpResult lp = solve_lp(Eigen::Vector2d(1, 1), a, b);
  REQUIRE(lp.status == LpStatus::Optimal);
  CHECK(lp.value == doctest::Approx(2.0));
}

TEST_CASE("pool-adjacent-violators matches the block oracle") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd y = gaussian_vector(1 + i % 6, rng);
    CHECK((project_nonincreasing(y) - isotonic_oracle(y)).norm() <= 1e-12);
  }
}

TEST_CASE("Dykstra projection against a 2-D active-set oracle") {
  auto hs = flagship_halfspaces();
  hs.push_back({Eigen::Vector2d(-1, 1), 0.0});
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d y = 3.0 * gaussian_vector(2, rng);
    // Candidates: y, its projection onto each line, and every vertex.
    double best = kInf;
    auto feasible = [&](const Eigen::Vector2d& p) {
      for (const auto& h : hs)
        if (h.normal.dot(p) > h.offset + 1e-12) return false;
      return true;
    };
    auto consider = [&](const Eigen::Vector2d& p) {
      if (feasible(p)) best = std::min(best, (p - y).norm());
    };
    consider(y);
    for (const auto& h : hs) consider(y - (h.normal.dot(y) - h.offset) / h.normal.squaredNorm() * h.normal);
    for (std::size_t a = 0; a < hs.size(); ++a)
      for (std::size_t b = a + 1; b < hs.size(); ++b) {
        Eigen::Matrix2d m;
        m.row(0) = hs[a].normal.transpose();
        m.row(1) = hs[b].normal.transpose();
        if (std::abs(m.determinant()) > 1e-12) consider(m.inverse() * Eigen::Vector2d(hs[a].offset, hs[b].offset));
      }
    const DykstraResult r = dykstra_project(y, hs, false);
    CHECK(r.converged);
    CHECK((r.point - y).norm() == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("combiner monotonicity probe") {
  Combiner::sum().verify_monotone(-1, 1, {0.0, 5.0});
  Combiner::product().verify_monotone(0, 1, {2.0});
  CHECK_THROWS_AS(Combiner::product().verify_monotone(0, 1, {-1.0}), ContractError);
  CHECK_THROWS_AS(Combiner::custom("square", [](double a, double) { return a * a; }).verify_monotone(-1, 1, {0.0}),
                  ContractError);
}

TEST_CASE("orbit_linear examples") {
  RnAlgebra r3(3);
  const SolveReport m = orbit_linear(r3, Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0, 1, 0), Sense::Max);
  CHECK(m.optimal_value == 3.0);
  CHECK(m.optimizer_v == Element(Eigen::Vector3d(0, 0, 1)));
  CHECK(m.commutation.verdict);
  CHECK(m.commutes_with == "c");

  const SolveReport z = orbit_linear(r3, Eigen::Vector3d(1, 2, 3), Element::Zero(3), Sense::Min);
  CHECK(z.optimal_value == 0.0);

  SymAlgebra s2(2);
  const Element c = s2.from_matrix(mat2(0, 1, 1, 0));
  const Element u = s2.from_matrix(mat2(1, 0, 0, 0));
  const SolveReport s = orbit_linear(s2, c, u, Sense::Max);
  CHECK(s.optimal_value == doctest::Approx(1.0));
  CHECK(s.reduction_gap <= 1e-12);
  // Sampled orbit never exceeds the value.
  Rng rng(2);
  for (int i = 0; i < 500; ++i) CHECK(s2.inner_v(c, *s2.sample_orbit(s2.lambda(u), rng)) <= 1.0 + 1e-12);

  const SolveReport lo = orbit_linear(s2, c, u, Sense::Min);
  CHECK(lo.optimal_value == doctest::Approx(-1.0));
  CHECK(lo.commutes_with == "-c");
  CHECK(lo.commutation.verdict);
}

TEST_CASE("orbit_distance examples") {
  RnAlgebra r2(2);
  const SolveReport mn = orbit_distance(r2, v2(1, 0), v2(0, 2), Sense::Min);
  CHECK(mn.optimal_value == doctest::Approx(1.0));
  CHECK(mn.commutation.verdict);
  const SolveReport mx = orbit_distance(r2, v2(1, 0), v2(0, 2), Sense::Max);
  CHECK(mx.optimal_value == doctest::Approx(std::sqrt(5.0)));
  CHECK(mx.commutes_with == "-c");
  CHECK(mx.commutation.verdict);
  CHECK(orbit_distance(r2, v2(3, 1), v2(1, 3), Sense::Min).optimal_value == doctest::Approx(0.0));

  SymAlgebra s2(2);
  const Element c = s2.from_matrix(mat2(5, 0, 0, 1));
  const Element u = s2.from_matrix(mat2(0, 2, 2, 0));
  const SolveReport s = orbit_distance(s2, c, u, Sense::Min);
  CHECK(s.optimal_value == doctest::Approx(std::sqrt(18.0)));
  Rng rng(7);
  for (int i = 0; i < 500; ++i) CHECK(s2.norm_v(c - *s2.sample_orbit(s2.lambda(u), rng)) >= std::sqrt(18.0) - 1e-12);
}

TEST_CASE("flagship problem: LP and multistart agree with vertex enumeration") {
  SymAlgebra s2(2);
  const Element c = s2.from_matrix(mat2(1, 0, 0, -1));
  const auto set = SpectralSetSpec::polyhedron(flagship_halfspaces());
  const SolveReport lp = reduce_solve_linear(s2, c, set, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  CHECK(lp.method == "simplex");
  CHECK(lp.optimal_value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((s2.to_matrix(lp.optimizer_v) - mat2(2, 0, 0, 0)).norm() <= 1e-12);
  CHECK(lp.commutation.verdict);
  CHECK(lp.attained);

  auto hs = flagship_halfspaces();
  hs.push_back({Eigen::Vector2d(-1, 1), 0.0});
  CHECK(lp.optimal_value == doctest::Approx(vertex_max_2d(hs, Eigen::Vector2d(1, -1))));

  // Interval image: [-2, 2].
  const IntervalImage iv = interval_image(s2, c, set, 1, 200);
  CHECK(iv.delta == doctest::Approx(-2.0));
  CHECK(iv.Delta == doctest::Approx(2.0));
  CHECK(iv.lower_cert.verdict);
  CHECK(iv.upper_cert.verdict);
  CHECK(iv.sampled_excess <= 1e-9);

  // Product combiner goes through the multistart path.
  const SolveReport pr = reduce_solve_linear(s2, c, set, SpectralFunctionSpec::zero(), Combiner::custom("shift", [](double a, double b) { return a + 0.0 * b; }), Sense::Max);
  CHECK(pr.method == "projected-multistart");
  CHECK_FALSE(pr.attained);
  CHECK(pr.optimal_value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("finite set reduction examples") {
  RnAlgebra r2(2);
  const auto set = SpectralSetSpec::finite({v2(1, 0), v2(0, 1)});
  const SolveReport s = reduce_solve_linear(r2, v2(1, 2), set, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  CHECK(s.optimal_value == 2.0);
  CHECK(s.optimizer_v == v2(0, 1));
  CHECK(s.commutation.verdict);

  const auto pinv = SpectralSetSpec::finite({v2(0, 2), v2(2, 0)}, true);
  const SolveReport d = reduce_solve_distance(r2, v2(1, 0), pinv, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Min);
  CHECK(d.optimal_value == doctest::Approx(1.0));
  CHECK(d.commutation.verdict);

  // Q with no sorted point: empty spectral set.
  const auto empty = SpectralSetSpec::finite({v2(0, 1)});
  const SolveReport e = reduce_solve_linear(r2, v2(1, 2), empty, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  CHECK_FALSE(e.feasible);
  CHECK(e.optimal_value == -kInf);
  const SolveReport e2 = reduce_solve_linear(r2, v2(1, 2), empty, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Min);
  CHECK(e2.optimal_value == kInf);
}

TEST_CASE("nearest spectral point in Sym(2)") {
  SymAlgebra s2(2);
  const Element c = s2.from_matrix(mat2(-1, 0, 0, 0));
  const auto set = SpectralSetSpec::polyhedron(flagship_halfspaces());
  const SolveReport r = reduce_solve_distance(s2, c, set, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Min);
  CHECK(r.method == "dykstra-projection");
  CHECK(r.optimal_value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK((r.optimizer_w - v2(1, 0)).norm() <= 1e-8);
  CHECK(r.commutation.verdict);
}

TEST_CASE("infeasible and unbounded polyhedra") {
  RnAlgebra r2(2);
  const auto empty = SpectralSetSpec::polyhedron({{v2(1, 0), -1.0}, {v2(0, -1), 0.0}});
  const SolveReport e = reduce_solve_linear(r2, v2(1, 0), empty, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  CHECK_FALSE(e.feasible);
  const auto half = SpectralSetSpec::polyhedron({{v2(0, -1), 0.0}});
  const SolveReport u = reduce_solve_linear(r2, v2(1, 0), half, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  CHECK(u.feasible);
  CHECK(u.optimal_value == kInf);
  CHECK_FALSE(u.attained);
}

TEST_CASE("neg_logdet and tabulated phi") {
  SymAlgebra s2(2);
  // min <I, X> - log det X over the flagship set: q = (1, 1).
  const auto set = SpectralSetSpec::polyhedron(flagship_halfspaces());
  const SolveReport r = reduce_solve_linear(s2, s2.unit(), set, SpectralFunctionSpec::neg_logdet(), Combiner::sum(), Sense::Min);
  CHECK(r.feasible);
  CHECK(r.optimal_value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK((r.optimizer_w - v2(1, 1)).norm() <= 1e-3);

  const auto table = SpectralFunctionSpec::table({v2(2, 1)}, {7.0});
  CHECK(table(v2(1, 2)) == 7.0);
  CHECK_THROWS_AS(table(v2(3, 1)), ContractError);
}

TEST_CASE("max-affine objectives") {
  RnAlgebra r2(2);
  const auto h = Objective::max_affine({{v2(1, 0), 0.0}, {v2(-1, 0), 0.0}});
  const auto orbit = SpectralSetSpec::orbit(v2(1, -1));
  const SolveReport mx = reduce_solve(r2, h, orbit, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Max);
  CHECK(mx.optimal_value == doctest::Approx(1.0));
  CHECK(mx.commutation.verdict);
  const SolveReport mn = reduce_solve(r2, h, orbit, SpectralFunctionSpec::zero(), Combiner::sum(), Sense::Min);
  CHECK(mn.optimal_value == doctest::Approx(1.0));
  CHECK(mn.commutes_with == "none");
  CHECK(mn.attained);
}

TEST_CASE("envelopes") {
  RnAlgebra r2(2);
  const std::vector<AffinePiece> abs1 = {{v2(1, 0), 0.0}, {v2(-1, 0), 0.0}};
  const SpecPoint q = v2(1, -1);
  CHECK(convex_envelope_upper(r2, abs1, q) == doctest::Approx(1.0));
  CHECK(convex_envelope_lower_star(r2, abs1, q) == doctest::Approx(-1.0));
  const auto hfun = [&](const Element& x) { return max_affine_value(r2, abs1, x); };
  const LowerEnvelope low = convex_envelope_lower(r2, hfun, q);
  CHECK(low.exact);
  CHECK(low.value == doctest::Approx(1.0));

  // Linear h: h_** = <lambda~(c), q>.
  const Element c = v2(2, -3);
  const LowerEnvelope lin = convex_envelope_lower(r2, [&](const Element& x) { return c.dot(x); }, v2(4, 1));
  CHECK(lin.value == doctest::Approx(lambda_tilde(r2, c).dot(v2(4, 1))));

  // ||x||^2 is constant on orbits.
  SymAlgebra s2(2);
  const LowerEnvelope sq = convex_envelope_lower(s2, [&](const Element& x) { return s2.inner_v(x, x); }, v2(3, -1), 200);
  CHECK_FALSE(sq.exact);
  CHECK(sq.value == doctest::Approx(10.0));

  // Sandwich h_* <= h_** <= h* on Sym(2) probes.
  Rng rng(3);
  const std::vector<AffinePiece> pieces = {{s2.sample(rng), 0.3}, {s2.sample(rng), -0.2}, {s2.sample(rng), 0.0}};
  for (int i = 0; i < 10; ++i) {
    const SpecPoint p = sort_desc(gaussian_vector(2, rng));
    const double lo = convex_envelope_lower_star(s2, pieces, p);
    const double mid = convex_envelope_lower(s2, [&](const Element& x) { return max_affine_value(s2, pieces, x); }, p, 500, i).value;
    const double hi = convex_envelope_upper(s2, pieces, p);
    CHECK(lo <= mid + 1e-9);
    CHECK(mid <= hi + 1e-9);
  }
}

TEST_CASE("h* does not depend on the max-affine representation") {
  RnAlgebra r3(3);
  Rng rng(8);
  const std::vector<AffinePiece> a = {{Eigen::Vector3d(1, 0, 2), 0.5}, {Eigen::Vector3d(-1, 1, 0), 0.0}};
  std::vector<AffinePiece> b = a;
  // Adding a piece dominated everywhere leaves h unchanged.
  b.push_back({0.5 * (a[0].c + a[1].c), 0.5 * (a[0].alpha + a[1].alpha) - 1.0});
  for (int i = 0; i < 50; ++i) {
    const SpecPoint q = sort_desc(gaussian_vector(3, rng));
    CHECK(convex_envelope_upper(r3, a, q) == doctest::Approx(convex_envelope_upper(r3, b, q)));
  }
}

TEST_CASE("VI commutation examples") {
  RnAlgebra r2(2);
  // G constant c, a = argmin over the orbit.
  const Element c = v2(1, 3);
  const Element u = v2(2, -1);
  const SolveReport lo = orbit_linear(r2, c, u, Sense::Min);
  const ViReport vi = vi_commutation_check(r2, [&](const Element&) { return c; }, SpectralSetSpec::orbit(u), lo.optimizer_v);
  CHECK(vi.residual_exact);
  CHECK(vi.vi_residual >= 0.0);
  CHECK(vi.commutation.verdict);
  CHECK(vi.contract_holds);

  const ViReport zero = vi_commutation_check(r2, [](const Element&) { return Element(Element::Zero(2)); },
                                             SpectralSetSpec::orbit(u), u);
  CHECK(zero.vi_residual == 0.0);
  CHECK(zero.commutation.verdict);

  const auto set = SpectralSetSpec::finite({v2(1, 0)}, true);
  const ViReport bad = vi_commutation_check(r2, [](const Element& x) { return x; }, set, v2(1, 0));
  CHECK(bad.vi_residual == doctest::Approx(-1.0));
  CHECK(bad.contract_holds);
}

TEST_CASE("local-min commutation") {
  RnAlgebra r2(2);
  const Element c = v2(1, 2);
  const Element a = -c / c.norm();
  const auto ball = SpectralSetSpec::grid([](const SpecPoint& q) { return q.norm() <= 1.0; }, v2(-1, -1), v2(1, 1), 33);
  const LocalMinReport rep = local_min_commutation_check(r2, [&](const Element& x) { return c.dot(x); }, ball, a);
  CHECK((rep.gradient - c).norm() <= 1e-6);
  CHECK(rep.commutation.verdict);

  // Nonconvex two-point set: the gradient at (1,0) is (0,1).
  auto h = [](const Element& v) { return 0.5 * v[0] * v[0] - v[0] + v[0] * (v[1] * v[1] + v[1]); };
  const auto two = SpectralSetSpec::finite({v2(1, 0)}, true);
  const LocalMinReport ex = local_min_commutation_check(r2, h, two, v2(1, 0));
  CHECK((ex.gradient - v2(0, 1)).norm() <= 1e-8);
  CHECK(operator_commute_check(r2, v2(1, 0), ex.gradient));
  CHECK_FALSE(strong_commute_check(r2, v2(1, 0), ex.gradient).verdict);

  // Radial h on R^1: gradient 2a, and a commutes with -2a only at a = 0,
  // which is the minimizer over any interval containing 0.
  RnAlgebra r1(1);
  const auto interval = SpectralSetSpec::polyhedron({{Eigen::VectorXd::Ones(1), 1.0}, {-Eigen::VectorXd::Ones(1), 1.0}});
  const LocalMinReport rad = local_min_commutation_check(r1, [](const Element& x) { return x.squaredNorm(); }, interval,
                                                         Element::Zero(1));
  CHECK(rad.commutation.verdict);
  CHECK(rad.probe_violations == 0);
}

TEST_CASE("subdifferential commutation") {
  RnAlgebra r2(2);
  const std::vector<AffinePiece> abs1 = {{v2(1, 0), 0.0}, {v2(-1, 0), 0.0}};
  const auto ball = SpectralSetSpec::grid([](const SpecPoint& q) { return q.norm() <= 1.0; }, v2(-1, -1), v2(1, 1), 17);
  for (double beta : {-1.0, -0.5, 0.0, 0.7, 1.0}) {
    const SubdiffReport rep = subdiff_min_commutation_check(r2, abs1, ball, v2(0, beta));
    CHECK(rep.active.size() == 2);
    CHECK(rep.found);
    CHECK(commute_check(r2, v2(0, beta), -rep.c).verdict);
  }
  // 0 itself lies in the searched simplex and commutes with everything.
  CHECK(commute_check(r2, v2(0, 0.3), Element::Zero(2)).verdict);

  // Single affine piece reduces to the linear case.
  const SubdiffReport one = subdiff_min_commutation_check(r2, {{v2(1, 2), 0.0}}, ball, -v2(1, 2) / std::sqrt(5.0));
  CHECK(one.found);
  CHECK(one.c == v2(1, 2));

  // h = max(x1, x2) on {q1 + q2 = 0, ||q|| <= 1} is minimized at a = 0, where
  // both pieces are active; off the minimizer only one piece is active and
  // a = (-t, t) does not commute with -(0, 1).
  const std::vector<AffinePiece> mx = {{v2(1, 0), 0.0}, {v2(0, 1), 0.0}};
  const SubdiffReport m = subdiff_min_commutation_check(r2, mx, ball, Element::Zero(2));
  CHECK(m.active.size() == 2);
  CHECK(m.found);
  const SubdiffReport off = subdiff_min_commutation_check(r2, mx, ball, v2(-0.5, 0.5));
  CHECK(off.active.size() == 1);
  CHECK_FALSE(off.found);
}

TEST_CASE("Hausdorff distances") {
  RnAlgebra r2(2);
  const auto e = SpectralSetSpec::finite({v2(2, 0)}, true);
  const auto f = SpectralSetSpec::finite({v2(1, 0)}, true);
  CHECK(hausdorff_spectral(r2, e, f) == doctest::Approx(1.0));
  CHECK(*hausdorff_ambient(r2, e, f) == doctest::Approx(1.0));
  CHECK(hausdorff_spectral(r2, e, e) == 0.0);
  CHECK(hausdorff({v2(1, 1)}, {v2(3, 1), v2(1, 0)}) == doctest::Approx(2.0));
}
