#include "ftvn/optimality.hpp"

#include <limits>

namespace ftvn {

ViReport vi_commutation_check(const FtvnSystem& inst, const VectorField& g, const SpectralSetSpec& set,
                              const Element& a, double tol, std::uint64_t seed, int samples) {
  inst.require_element(a, "a");
  ViReport rep;
  rep.a_in_set = set_contains(inst, set, a);
  const Element ga = g(a);
  inst.require_element(ga, "G(a)");

  rep.vi_residual = std::numeric_limits<double>::infinity();
  auto consider = [&](const Element& x) {
    const double r = inst.inner_v(ga, x - a);
    if (r < rep.vi_residual) {
      rep.vi_residual = r;
      rep.worst_x = x;
    }
  };
  if (auto all = enumerate_set(inst, set)) {
    for (const auto& x : *all) consider(x);
    rep.residual_exact = true;
  } else {
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
      auto x = sample_set(inst, set, rng);
      if (!x) break;
      consider(*x);
    }
  }
  if (!std::isfinite(rep.vi_residual)) rep.vi_residual = 0.0;

  rep.commutation = commute_check(inst, a, Element(-ga), tol);
  const bool solves = rep.residual_exact && rep.a_in_set &&
                      rep.vi_residual >= -tol * (1.0 + inst.norm_v(ga) * inst.norm_v(a));
  rep.contract_holds = !solves || rep.commutation.verdict;
  return rep;
}

Element fd_gradient(const ScalarField& h, const Element& a, double fd_step) {
  const double step = fd_step * (1.0 + a.norm());
  Element g(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    Element p = a;
    Element m = a;
    p[i] += step;
    m[i] -= step;
    g[i] = (h(p) - h(m)) / (2.0 * step);
  }
  return g;
}

LocalMinReport local_min_commutation_check(const FtvnSystem& inst, const ScalarField& h,
                                           const SpectralSetSpec& set, const Element& a, double fd_step,
                                           std::uint64_t seed, int n_probes, double tol) {
  inst.require_element(a, "a");
  LocalMinReport rep;
  // fd_gradient is the coordinate gradient; convert to the V gradient when
  // inner_v is not the dot product by solving <grad, e_i>_V = dh/dx_i.
  const Element coord = fd_gradient(h, a, fd_step);
  const Index n = inst.dim_v();
  Matrix gram(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) gram(i, j) = inst.inner_v(Element::Unit(n, i), Element::Unit(n, j));
  }
  rep.gradient = gram.ldlt().solve(coord);
  rep.commutation = commute_check(inst, a, Element(-rep.gradient), tol);

  const double ha = h(a);
  static constexpr double kSteps[] = {1e-3, 1e-2, 1e-1};
  Rng rng(seed);
  for (int p = 0; p < n_probes; ++p) {
    auto x = sample_set(inst, set, rng);
    if (!x) break;
    const double t = kSteps[p % 3];
    const Element y = (1.0 - t) * a + t * *x;
    if (!set_contains(inst, set, y)) continue;
    ++rep.probes;
    const double drop = ha - h(y);
    rep.worst_drop = std::max(rep.worst_drop, drop);
    if (drop > tol * (1.0 + std::abs(ha))) ++rep.probe_violations;
  }
  return rep;
}

namespace {

// Calls fn on every composition of `total` into k nonnegative parts, in
// lexicographic order, until fn returns true.
bool for_each_composition(int total, std::size_t k, std::vector<int>& parts, std::size_t pos,
                          const std::function<bool(const std::vector<int>&)>& fn) {
  if (pos + 1 == k) {
    parts[pos] = total;
    return fn(parts);
  }
  for (int v = 0; v <= total; ++v) {
    parts[pos] = v;
    if (for_each_composition(total - v, k, parts, pos + 1, fn)) return true;
  }
  return false;
}

}  // namespace

SubdiffReport subdiff_min_commutation_check(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces,
                                            const SpectralSetSpec& set, const Element& a, double tol) {
  (void)set;
  inst.require_element(a, "a");
  if (pieces.empty()) throw ContractError("subdiff_min_commutation_check: no affine pieces");
  SubdiffReport rep;
  std::vector<double> vals;
  double hmax = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    vals.push_back(inst.inner_v(p.c, a) + p.alpha);
    hmax = std::max(hmax, vals.back());
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (vals[i] >= hmax - tol * (1.0 + std::abs(hmax))) rep.active.push_back(i);
  }
  const std::size_t k = rep.active.size();
  if (k > 5) throw ContractError("subdiff_min_commutation_check: more than 5 active pieces");

  constexpr int kGrid = 32;
  std::vector<int> parts(k, 0);
  for_each_composition(kGrid, k, parts, 0, [&](const std::vector<int>& w) {
    Element c = Element::Zero(inst.dim_v());
    std::vector<double> weights(k);
    for (std::size_t j = 0; j < k; ++j) {
      weights[j] = static_cast<double>(w[j]) / kGrid;
      c += weights[j] * pieces[rep.active[j]].c;
    }
    CommutationCert cert = commute_check(inst, a, Element(-c), tol);
    if (!cert.verdict) return false;
    rep.found = true;
    rep.c = c;
    rep.weights = weights;
    rep.commutation = cert;
    return true;
  });
  return rep;
}

}  // namespace ftvn
