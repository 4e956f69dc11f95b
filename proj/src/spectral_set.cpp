#include "ftvn/spectral_set.hpp"

#include "ftvn/projection.hpp"

#include <cmath>

namespace ftvn {

SpectralSetSpec SpectralSetSpec::finite(PointSet points, bool permutation_invariant) {
  return {FiniteSet{dedupe(points)}, permutation_invariant};
}

SpectralSetSpec SpectralSetSpec::polyhedron(std::vector<Halfspace> halfspaces) {
  return {OrderedPolyhedron{std::move(halfspaces)}, false};
}

SpectralSetSpec SpectralSetSpec::orbit(Element u) { return {OrbitOf{std::move(u)}, false}; }

SpectralSetSpec SpectralSetSpec::grid(std::function<bool(const SpecPoint&)> membership,
                                      SpecPoint lower, SpecPoint upper, int resolution) {
  if (lower.size() != upper.size()) throw DimensionMismatch("grid oracle: box bounds differ in length");
  if (resolution < 2) throw ContractError("grid oracle: resolution must be at least 2");
  return {GridOracle{std::move(membership), std::move(lower), std::move(upper), resolution}, false};
}

namespace {

PointSet scan_grid(const FtvnSystem& inst, const GridOracle& g, double tol) {
  const Index n = g.lower.size();
  if (n != inst.dim_w()) throw DimensionMismatch("grid oracle: box dimension differs from W");
  const double total = std::pow(static_cast<double>(g.resolution), static_cast<double>(n));
  if (total > 2e6) throw ContractError("grid oracle: more than 2e6 grid points");
  PointSet out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const double denom = g.resolution - 1;
  while (true) {
    SpecPoint q(n);
    for (Index i = 0; i < n; ++i)
      q[i] = g.lower[i] + (g.upper[i] - g.lower[i]) * idx[static_cast<std::size_t>(i)] / denom;
    if (inst.in_image(q, tol) && g.membership(q)) out.push_back(q);
    Index k = 0;
    while (k < n && ++idx[static_cast<std::size_t>(k)] == g.resolution) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == n) break;
  }
  return out;
}

}  // namespace

PointSet image_points(const FtvnSystem& inst, const SpectralSetSpec& set, double tol) {
  if (const auto* f = std::get_if<FiniteSet>(&set.shape)) {
    for (const auto& p : f->points) inst.require_point(p, "set point");
    const PointSet q = set.permutation_invariant ? sigma_orbit(f->points) : f->points;
    PointSet out;
    for (const auto& p : q)
      if (inst.in_image(p, tol)) out.push_back(p);
    return dedupe(out);
  }
  if (const auto* o = std::get_if<OrbitOf>(&set.shape)) {
    inst.require_element(o->u, "orbit generator");
    return {inst.lambda(o->u)};
  }
  if (const auto* g = std::get_if<GridOracle>(&set.shape)) return scan_grid(inst, *g, tol);
  throw ContractError("image_points: polyhedral sets have no finite image");
}

std::vector<Halfspace> polyhedron_constraints(const FtvnSystem& inst, const OrderedPolyhedron& poly) {
  std::vector<Halfspace> out;
  for (const auto& h : poly.halfspaces) {
    inst.require_point(h.normal, "halfspace normal");
    out.push_back(h);
  }
  for (auto& h : nonincreasing_cone(inst.dim_w())) out.push_back(std::move(h));
  // The instance cone repeats the order constraints for sorted images; keep only new rows.
  for (auto& h : inst.image_cone()) {
    bool dup = false;
    for (const auto& e : out) dup = dup || ((e.normal - h.normal).norm() == 0.0 && e.offset == h.offset);
    if (!dup) out.push_back(std::move(h));
  }
  return out;
}

bool image_contains(const FtvnSystem& inst, const SpectralSetSpec& set, const SpecPoint& q, double tol) {
  if (q.size() != inst.dim_w()) return false;
  if (const auto* p = std::get_if<OrderedPolyhedron>(&set.shape)) {
    for (const auto& h : polyhedron_constraints(inst, *p))
      if (h.normal.dot(q) - h.offset > tol * (1.0 + h.normal.norm() * q.norm())) return false;
    return inst.in_image(q, tol);
  }
  if (const auto* g = std::get_if<GridOracle>(&set.shape)) return inst.in_image(q, tol) && g->membership(q);
  return contains(image_points(inst, set), q, tol * (1.0 + q.norm()));
}

bool set_contains(const FtvnSystem& inst, const SpectralSetSpec& set, const Element& x, double tol) {
  inst.require_element(x);
  return image_contains(inst, set, inst.lambda(x), tol);
}

std::optional<std::vector<Element>> enumerate_set(const FtvnSystem& inst, const SpectralSetSpec& set) {
  if (!set.is_finite()) return std::nullopt;
  std::vector<Element> out;
  for (const auto& q : image_points(inst, set)) {
    auto orbit = inst.enumerate_orbit(q);
    if (!orbit) return std::nullopt;
    out.insert(out.end(), orbit->begin(), orbit->end());
  }
  return out;
}

std::optional<Element> sample_set(const FtvnSystem& inst, const SpectralSetSpec& set, Rng& rng) {
  if (const auto* p = std::get_if<OrderedPolyhedron>(&set.shape)) {
    const auto cons = polyhedron_constraints(inst, *p);
    const DykstraResult proj = dykstra_project(gaussian_vector(inst.dim_w(), rng), cons, true);
    if (proj.max_violation > 1e-7) return std::nullopt;
    return inst.sample_orbit(proj.point, rng);
  }
  if (const auto* g = std::get_if<GridOracle>(&set.shape)) {
    for (int tries = 0; tries < 1000; ++tries) {
      SpecPoint q(g->lower.size());
      for (Index i = 0; i < q.size(); ++i) q[i] = uniform(rng, g->lower[i], g->upper[i]);
      if (!inst.in_image(q, 0.0)) q = sort_desc(q);
      if (inst.in_image(q, 0.0) && g->membership(q)) return inst.sample_orbit(q, rng);
    }
    return std::nullopt;
  }
  const PointSet pts = image_points(inst, set);
  if (pts.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  return inst.sample_orbit(pts[pick(rng)], rng);
}

}  // namespace ftvn
