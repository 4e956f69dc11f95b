#include "ftvn/reduce.hpp"

#include "ftvn/envelope.hpp"
#include "ftvn/lp.hpp"
#include "ftvn/projection.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ftvn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Combiner, spectral functions, objectives

Combiner::Combiner(Kind kind, std::string name, std::function<double(double, double)> fn)
    : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

Combiner Combiner::sum() {
  return Combiner(Kind::Sum, "sum", [](double a, double b) { return a + b; });
}

Combiner Combiner::product() {
  return Combiner(Kind::Product, "product", [](double a, double b) { return a * b; });
}

Combiner Combiner::custom(std::string name, std::function<double(double, double)> fn) {
  return Combiner(Kind::Custom, std::move(name), std::move(fn));
}

void Combiner::verify_monotone(double lo, double hi, const std::vector<double>& second) const {
  if (!(hi > lo)) {
    const double mid = std::isfinite(lo) ? lo : 0.0;
    lo = mid - 1.0;
    hi = mid + 1.0;
  }
  std::vector<double> bs = second;
  if (bs.empty()) bs.push_back(0.0);
  constexpr int kProbes = 17;
  for (double b : bs) {
    if (!std::isfinite(b)) continue;
    double prev = fn_(lo, b);
    for (int k = 1; k < kProbes; ++k) {
      const double a = lo + (hi - lo) * k / (kProbes - 1);
      const double cur = fn_(a, b);
      if (!(cur > prev)) {
        throw ContractError("combiner '" + name_ + "' is not strictly increasing in its first argument at b = " +
                            fmt(b));
      }
      prev = cur;
    }
  }
}

SpectralFunctionSpec SpectralFunctionSpec::zero() {
  SpectralFunctionSpec s;
  s.kind = "zero";
  s.phi = [](const SpecPoint&) { return 0.0; };
  s.linear_gradient = SpecPoint();
  return s;
}

SpectralFunctionSpec SpectralFunctionSpec::linear(SpecPoint gradient, double offset) {
  SpectralFunctionSpec s;
  s.kind = "linear";
  s.phi = [gradient, offset](const SpecPoint& q) { return gradient.dot(q) + offset; };
  s.permutation_invariant = false;
  s.linear_gradient = std::move(gradient);
  s.linear_offset = offset;
  return s;
}

SpectralFunctionSpec SpectralFunctionSpec::neg_logdet() {
  SpectralFunctionSpec s;
  s.kind = "neg_logdet";
  s.phi = [](const SpecPoint& q) {
    double v = 0.0;
    for (Index i = 0; i < q.size(); ++i) {
      if (!(q[i] > 0.0)) return kInf;
      v -= std::log(q[i]);
    }
    return v;
  };
  return s;
}

SpectralFunctionSpec SpectralFunctionSpec::table(PointSet points, std::vector<double> values, double tol) {
  if (points.size() != values.size()) throw DimensionMismatch("custom_table: points and values differ in count");
  for (auto& p : points) p = sort_desc(p);
  SpectralFunctionSpec s;
  s.kind = "custom_table";
  s.convex = false;
  s.phi = [points = std::move(points), values = std::move(values), tol](const SpecPoint& q) {
    const SpecPoint key = sort_desc(q);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() == key.size() && (points[i] - key).cwiseAbs().maxCoeff() <= tol * (1.0 + key.norm())) {
        return values[i];
      }
    }
    throw ContractError("custom_table: phi is not tabulated at the requested point");
  };
  return s;
}

Objective Objective::linear(Element c) { return {Kind::Linear, std::move(c), {}}; }
Objective Objective::distance(Element c) { return {Kind::Distance, std::move(c), {}}; }
Objective Objective::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw ContractError("max_affine objective needs at least one piece");
  return {Kind::MaxAffine, Element(), std::move(pieces)};
}

double Objective::operator()(const FtvnSystem& inst, const Element& x) const {
  switch (kind) {
    case Kind::Linear: return inst.inner_v(c, x);
    case Kind::Distance: return inst.norm_v(c - x);
    case Kind::MaxAffine: return max_affine_value(inst, pieces, x);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Reduced problem

namespace {

struct Reduced {
  std::function<double(const SpecPoint&)> outer;  // f*, f_*, g*, g_*, h*, or h_**
  bool exact = true;
};

Reduced reduced_outer(const FtvnSystem& inst, const Objective& obj, Sense sense, std::uint64_t seed) {
  switch (obj.kind) {
    case Objective::Kind::Linear: {
      const SpecPoint lc = sense == Sense::Max ? inst.lambda(obj.c) : lambda_tilde(inst, obj.c);
      return {[lc](const SpecPoint& q) { return lc.dot(q); }, true};
    }
    case Objective::Kind::Distance: {
      const SpecPoint lc = sense == Sense::Min ? inst.lambda(obj.c) : lambda_tilde(inst, obj.c);
      return {[lc](const SpecPoint& q) { return (lc - q).norm(); }, true};
    }
    case Objective::Kind::MaxAffine: {
      if (sense == Sense::Max) {
        return {[&inst, pieces = obj.pieces](const SpecPoint& q) {
                  return convex_envelope_upper(inst, pieces, q);
                },
                true};
      }
      const bool exact = inst.enumerate_orbit(SpecPoint::Zero(inst.dim_w())).has_value();
      auto h = [&inst, pieces = obj.pieces](const Element& x) { return max_affine_value(inst, pieces, x); };
      return {[&inst, h, seed](const SpecPoint& q) { return convex_envelope_lower(inst, h, q, 2000, seed).value; },
              exact};
    }
  }
  throw ContractError("unknown objective kind");
}

bool better(double a, double b, Sense sense) { return sense == Sense::Max ? a > b : a < b; }

std::vector<double> phi_samples(const SpectralFunctionSpec& phi, const PointSet& pts) {
  std::vector<double> out;
  for (const auto& q : pts) {
    const double v = phi(q);
    if (std::isfinite(v) && std::none_of(out.begin(), out.end(), [&](double o) { return o == v; })) {
      out.push_back(v);
    }
    if (out.size() >= 17) break;
  }
  return out;
}

void check_monotone(const Combiner& comb, const Reduced& red, const SpectralFunctionSpec& phi,
                    const PointSet& pts) {
  if (comb.kind() == Combiner::Kind::Sum) return;
  double lo = kInf;
  double hi = -kInf;
  for (const auto& q : pts) {
    const double v = red.outer(q);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  comb.verify_monotone(lo, hi, phi_samples(phi, pts));
}

// Vertices of {A q <= b} for small problems, by solving every n-subset.
PointSet polyhedron_vertices(const std::vector<Halfspace>& cons, Index n) {
  const std::size_t m = cons.size();
  if (m < static_cast<std::size_t>(n)) return {};
  double count = 1.0;
  for (Index k = 0; k < n; ++k) count = count * static_cast<double>(m - static_cast<std::size_t>(k)) / static_cast<double>(k + 1);
  if (count > 20000.0) return {};
  PointSet out;
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + n, true);
  do {
    Matrix a(n, n);
    Eigen::VectorXd b(n);
    Index r = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!mask[i]) continue;
      a.row(r) = cons[i].normal.transpose();
      b[r] = cons[i].offset;
      ++r;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.rank() < n) continue;
    const Eigen::VectorXd q = lu.solve(b);
    bool feasible = true;
    for (const auto& h : cons) feasible = feasible && h.normal.dot(q) - h.offset <= 1e-9 * (1.0 + std::abs(h.offset));
    if (feasible) out.push_back(q);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return dedupe(out, 1e-10);
}

Matrix stack_normals(const std::vector<Halfspace>& cons, Index n, Eigen::VectorXd& b) {
  Matrix a(static_cast<Index>(cons.size()), n);
  b.resize(static_cast<Index>(cons.size()));
  for (std::size_t i = 0; i < cons.size(); ++i) {
    a.row(static_cast<Index>(i)) = cons[i].normal.transpose();
    b[static_cast<Index>(i)] = cons[i].offset;
  }
  return a;
}

struct WSolution {
  bool feasible = true;
  bool bounded = true;
  double value = 0.0;
  SpecPoint q;
  bool attained = true;
  std::string method;
  int iterations = 0;
};

WSolution solve_finite(const PointSet& pts, const std::function<double(const SpecPoint&)>& objective,
                       Sense sense, const char* method) {
  WSolution sol;
  sol.method = method;
  if (pts.empty()) {
    sol.feasible = false;
    return sol;
  }
  sol.value = sense == Sense::Max ? -kInf : kInf;
  for (const auto& q : pts) {
    const double v = objective(q);
    ++sol.iterations;
    if (sol.q.size() == 0 || better(v, sol.value, sense)) {
      sol.value = v;
      sol.q = q;
    }
  }
  return sol;
}

WSolution projected_multistart(const std::vector<Halfspace>& cons, Index n,
                               const std::function<double(const SpecPoint&)>& objective, Sense sense,
                               const SolveOptions& opts, const PointSet& vertices) {
  // Minimize sign * objective over the polyhedron.
  const double sign = sense == Sense::Max ? -1.0 : 1.0;
  auto cost = [&](const SpecPoint& q) { return sign * objective(q); };
  auto project = [&](const SpecPoint& q) { return dykstra_project(q, cons, false).point; };

  PointSet starts = vertices;
  if (!vertices.empty()) {
    SpecPoint centroid = SpecPoint::Zero(n);
    for (const auto& v : vertices) centroid += v;
    starts.push_back(centroid / static_cast<double>(vertices.size()));
  }
  for (int s = 0; s < opts.starts; ++s) {
    Rng rng(split_seed(opts.seed, static_cast<std::uint64_t>(s)));
    starts.push_back(project(gaussian_vector(n, rng)));
  }

  WSolution sol;
  sol.method = "projected-multistart";
  sol.attained = false;
  double best = kInf;
  for (const auto& start : starts) {
    SpecPoint q = start;
    double f = cost(q);
    if (!std::isfinite(f)) continue;
    for (int it = 0; it < 200; ++it) {
      ++sol.iterations;
      const double h = 1e-6 * (1.0 + q.norm());
      SpecPoint grad(n);
      for (Index j = 0; j < n; ++j) {
        SpecPoint qp = q;
        SpecPoint qm = q;
        qp[j] += h;
        qm[j] -= h;
        grad[j] = (cost(qp) - cost(qm)) / (2.0 * h);
      }
      if (!grad.allFinite() || grad.norm() == 0.0) break;
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt, alpha *= 0.5) {
        const SpecPoint cand = project(q - alpha * grad);
        const double fc = cost(cand);
        if (std::isfinite(fc) && fc < f - 1e-14 * (1.0 + std::abs(f))) {
          moved = (cand - q).norm() > 1e-12 * (1.0 + q.norm());
          q = cand;
          f = fc;
          break;
        }
      }
      if (!moved) break;
    }
    if (f < best) {
      best = f;
      sol.q = q;
    }
  }
  if (sol.q.size() == 0) {
    sol.feasible = false;
    return sol;
  }
  sol.value = sign * best;
  return sol;
}

WSolution solve_polyhedron(const FtvnSystem& inst, const OrderedPolyhedron& poly, const Objective& obj,
                           const Reduced& red, const SpectralFunctionSpec& phi, const Combiner& comb,
                           Sense sense, const SolveOptions& opts) {
  const Index n = inst.dim_w();
  const auto cons = polyhedron_constraints(inst, poly);
  Eigen::VectorXd b;
  const Matrix a = stack_normals(cons, n, b);

  WSolution sol;
  const LpResult phase1 = solve_lp(Eigen::VectorXd::Zero(n), a, b);
  if (phase1.status == LpStatus::Infeasible) {
    sol.feasible = false;
    sol.method = "simplex";
    return sol;
  }

  const bool affine_phi = phi.linear_gradient.has_value();
  if (obj.kind == Objective::Kind::Linear && comb.kind() == Combiner::Kind::Sum && affine_phi) {
    const SpecPoint lc = sense == Sense::Max ? inst.lambda(obj.c) : lambda_tilde(inst, obj.c);
    SpecPoint d = lc;
    if (phi.linear_gradient->size() == n) d += *phi.linear_gradient;
    const double sign = sense == Sense::Max ? 1.0 : -1.0;
    const LpResult lp = solve_lp(sign * d, a, b);
    sol.method = "simplex";
    sol.iterations = lp.iterations;
    if (lp.status == LpStatus::Unbounded) {
      sol.bounded = false;
      sol.attained = false;
      sol.value = sense == Sense::Max ? kInf : -kInf;
      return sol;
    }
    sol.q = lp.x;
    sol.value = d.dot(lp.x) + phi.linear_offset;
    return sol;
  }

  if (obj.kind == Objective::Kind::Distance && sense == Sense::Min && comb.kind() == Combiner::Kind::Sum &&
      phi.kind == "zero") {
    const SpecPoint lc = inst.lambda(obj.c);
    const DykstraResult proj = dykstra_project(lc, cons, false);
    sol.method = "dykstra-projection";
    sol.iterations = proj.sweeps;
    sol.q = proj.point;
    sol.value = (lc - proj.point).norm();
    sol.attained = proj.converged;
    return sol;
  }

  const PointSet vertices = polyhedron_vertices(cons, n);
  if (!vertices.empty()) check_monotone(comb, red, phi, vertices);
  auto objective = [&](const SpecPoint& q) { return comb(red.outer(q), phi(q)); };
  return projected_multistart(cons, n, objective, sense, opts, vertices);
}

}  // namespace

SolveReport reduce_solve(const FtvnSystem& inst, const Objective& obj, const SpectralSetSpec& set,
                         const SpectralFunctionSpec& phi, const Combiner& comb, Sense sense,
                         const SolveOptions& opts) {
  if (obj.kind == Objective::Kind::MaxAffine) {
    for (const auto& p : obj.pieces) inst.require_element(p.c, "affine piece");
  } else {
    inst.require_element(obj.c, "c");
  }

  SolveReport rep;
  const Reduced red = reduced_outer(inst, obj, sense, opts.seed);
  auto objective = [&](const SpecPoint& q) { return comb(red.outer(q), phi(q)); };

  WSolution sol;
  if (const auto* poly = std::get_if<OrderedPolyhedron>(&set.shape)) {
    sol = solve_polyhedron(inst, *poly, obj, red, phi, comb, sense, opts);
  } else {
    const PointSet pts = image_points(inst, set);
    const bool grid = std::holds_alternative<GridOracle>(set.shape);
    if (!pts.empty()) check_monotone(comb, red, phi, pts);
    sol = solve_finite(pts, objective, sense, grid ? "grid-scan" : "enumerate");
    if (grid) sol.attained = false;
  }
  if (!red.exact) sol.attained = false;

  rep.method = sol.method;
  rep.iterations = sol.iterations;
  rep.trace.push_back("dispatch: " + sol.method);
  if (!sol.feasible) {
    rep.feasible = false;
    rep.optimal_value = sense == Sense::Max ? -kInf : kInf;
    rep.trace.push_back("lambda(E) is empty");
    return rep;
  }
  rep.optimal_value = sol.value;
  rep.attained = sol.attained;
  if (!sol.bounded) {
    rep.trace.push_back("reduced problem is unbounded");
    return rep;
  }
  rep.optimizer_w = sol.q;

  // Lift back to V.
  Element target;
  switch (obj.kind) {
    case Objective::Kind::Linear:
      target = sense == Sense::Max ? obj.c : Element(-obj.c);
      rep.commutes_with = sense == Sense::Max ? "c" : "-c";
      break;
    case Objective::Kind::Distance:
      target = sense == Sense::Min ? obj.c : Element(-obj.c);
      rep.commutes_with = sense == Sense::Min ? "c" : "-c";
      break;
    case Objective::Kind::MaxAffine:
      if (sense == Sense::Max) {
        std::size_t best = 0;
        double best_v = -kInf;
        for (std::size_t i = 0; i < obj.pieces.size(); ++i) {
          const double v = inst.lambda(obj.pieces[i].c).dot(sol.q) + obj.pieces[i].alpha;
          if (v > best_v) {
            best_v = v;
            best = i;
          }
        }
        target = obj.pieces[best].c;
        rep.commutes_with = "c_" + std::to_string(best);
      }
      break;
  }

  if (target.size()) {
    Witness w = inst.a3_witness(target, sol.q);
    if (!w) throw ContractError("reduce_solve: lifting failed: " + w.reason);
    rep.optimizer_v = *w.x;
    rep.commutation = commute_check(inst, rep.optimizer_v, target, opts.tol);
  } else {
    auto h = [&](const Element& x) { return max_affine_value(inst, obj.pieces, x); };
    const LowerEnvelope env = convex_envelope_lower(inst, h, sol.q, 2000, opts.seed);
    rep.optimizer_v = env.argmin;
    rep.trace.push_back(env.exact ? "h_** by orbit enumeration" : "h_** by orbit sampling");
  }
  rep.value_v = comb(obj(inst, rep.optimizer_v), phi(inst.lambda(rep.optimizer_v)));
  rep.reduction_gap = std::abs(rep.value_v - rep.optimal_value);
  return rep;
}

SolveReport reduce_solve_linear(const FtvnSystem& inst, const Element& c, const SpectralSetSpec& set,
                                const SpectralFunctionSpec& phi, const Combiner& comb, Sense sense,
                                const SolveOptions& opts) {
  return reduce_solve(inst, Objective::linear(c), set, phi, comb, sense, opts);
}

SolveReport reduce_solve_distance(const FtvnSystem& inst, const Element& c, const SpectralSetSpec& set,
                                  const SpectralFunctionSpec& phi, const Combiner& comb, Sense sense,
                                  const SolveOptions& opts) {
  return reduce_solve(inst, Objective::distance(c), set, phi, comb, sense, opts);
}

SolveReport orbit_linear(const FtvnSystem& inst, const Element& c, const Element& u, Sense sense, double tol) {
  SolveOptions opts;
  opts.tol = tol;
  return reduce_solve(inst, Objective::linear(c), SpectralSetSpec::orbit(u), SpectralFunctionSpec::zero(),
                      Combiner::sum(), sense, opts);
}

SolveReport orbit_distance(const FtvnSystem& inst, const Element& c, const Element& u, Sense sense,
                           double tol) {
  SolveOptions opts;
  opts.tol = tol;
  return reduce_solve(inst, Objective::distance(c), SpectralSetSpec::orbit(u), SpectralFunctionSpec::zero(),
                      Combiner::sum(), sense, opts);
}

IntervalImage interval_image(const FtvnSystem& inst, const Element& c, const SpectralSetSpec& set,
                             std::uint64_t seed, int samples, double tol) {
  SolveOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  const auto zero = SpectralFunctionSpec::zero();
  const SolveReport lo = reduce_solve_linear(inst, c, set, zero, Combiner::sum(), Sense::Min, opts);
  const SolveReport hi = reduce_solve_linear(inst, c, set, zero, Combiner::sum(), Sense::Max, opts);
  if (!lo.feasible || !hi.feasible) throw Infeasible("interval_image: the spectral set is empty");
  IntervalImage out;
  out.delta = lo.optimal_value;
  out.Delta = hi.optimal_value;
  out.lower_witness = lo.optimizer_v;
  out.upper_witness = hi.optimizer_v;
  out.lower_cert = lo.commutation;
  out.upper_cert = hi.commutation;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto x = sample_set(inst, set, rng);
    if (!x) break;
    ++out.sampled;
    const double v = inst.inner_v(c, *x);
    out.sampled_excess = std::max({out.sampled_excess, out.delta - v, v - out.Delta});
  }
  return out;
}

double hausdorff(const PointSet& a, const PointSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  auto directed = [](const PointSet& from, const PointSet& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = kInf;
      for (const auto& q : to) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff_spectral(const FtvnSystem& inst, const SpectralSetSpec& e, const SpectralSetSpec& f) {
  if (!e.is_finite() || !f.is_finite()) throw ContractError("hausdorff_spectral: needs finite set specs");
  return hausdorff(image_points(inst, e), image_points(inst, f));
}

std::optional<double> hausdorff_ambient(const FtvnSystem& inst, const SpectralSetSpec& e,
                                        const SpectralSetSpec& f) {
  auto ve = enumerate_set(inst, e);
  auto vf = enumerate_set(inst, f);
  if (!ve || !vf) return std::nullopt;
  // Distances in V use the instance norm; for R^n this is the Euclidean norm.
  if (ve->empty() && vf->empty()) return 0.0;
  if (ve->empty() || vf->empty()) return kInf;
  auto directed = [&](const std::vector<Element>& from, const std::vector<Element>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = kInf;
      for (const auto& y : to) best = std::min(best, inst.norm_v(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(*ve, *vf), directed(*vf, *ve));
}

}  // namespace ftvn
