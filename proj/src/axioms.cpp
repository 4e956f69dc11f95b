#include "ftvn/axioms.hpp"

#include <algorithm>
#include <limits>

namespace ftvn {

AxiomReport axiom_suite(const FtvnSystem& inst, std::uint64_t seed, int n_samples, double tol) {
  if (n_samples < 1) throw ContractError("axiom_suite: n_samples must be >= 1");
  AxiomReport rep;
  rep.instance = inst.name();
  rep.seed = seed;
  rep.n_samples = n_samples;
  rep.tol = tol;
  rep.a2_min = std::numeric_limits<double>::infinity();
  rep.sandwich_min = std::numeric_limits<double>::infinity();
  rep.lipschitz_min = std::numeric_limits<double>::infinity();
  int commuting = 0;

  // One child stream per sample keeps the report independent of evaluation order.
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
    const Element x = inst.sample(rng);
    const Element y = inst.sample(rng);
    const Element c = inst.sample(rng);
    const double alpha = uniform(rng, 0.0, 3.0);
    const SpecPoint q = inst.lambda(inst.sample(rng));

    const SpecPoint lx = inst.lambda(x);
    const SpecPoint ly = inst.lambda(y);
    const SpecPoint lc = inst.lambda(c);
    const SpecPoint ltc = lambda_tilde(inst, c);
    const double nx = inst.norm_v(x);
    const double ny = inst.norm_v(y);
    const double nc = inst.norm_v(c);

    rep.a1_max = std::max(rep.a1_max, std::abs(lx.norm() - nx) / (1.0 + nx));
    rep.a2_min = std::min(rep.a2_min, (lx.dot(ly) - inst.inner_v(x, y)) / (1.0 + nx * ny));
    rep.homogeneity_max = std::max(
        rep.homogeneity_max, (inst.lambda(alpha * x) - alpha * lx).norm() / (1.0 + alpha * nx));

    const double cx = inst.inner_v(c, x);
    const double inner_scale = 1.0 + nc * nx;
    rep.sandwich_min = std::min({rep.sandwich_min, (cx - ltc.dot(lx)) / inner_scale,
                                 (lc.dot(lx) - cx) / inner_scale});
    const double dist = inst.norm_v(c - x);
    const double dist_scale = 1.0 + nc + nx;
    rep.lipschitz_min = std::min({rep.lipschitz_min, (dist - (lc - lx).norm()) / dist_scale,
                                  ((ltc - lx).norm() - dist) / dist_scale});

    if (commute_check(inst, x, y, tol).verdict) ++commuting;

    const double target = lc.dot(q);
    const double witness_scale = 1.0 + nc * q.norm();
    Witness w = inst.a3_witness(c, q);
    if (!w) {
      ++rep.a3_failures;
      const double gap = w.gap / witness_scale;
      if (!rep.a3_failing_pair || gap > rep.a3_gap_max) rep.a3_failing_pair = {c, q};
      rep.a3_gap_max = std::max(rep.a3_gap_max, gap);
      continue;
    }
    rep.a3_gap_max = std::max(rep.a3_gap_max, w.gap / witness_scale);
    rep.a3_lambda_max = std::max(rep.a3_lambda_max, (inst.lambda(*w.x) - q).norm() / (1.0 + q.norm()));
    rep.a3_inner_max =
        std::max(rep.a3_inner_max, std::abs(inst.inner_v(c, *w.x) - target) / witness_scale);
  }
  rep.commute_rate = static_cast<double>(commuting) / n_samples;
  return rep;
}

OrbitOptimalityReport orbit_optimality_suite(const FtvnSystem& inst, std::uint64_t seed,
                                             int n_pairs, int n_orbit_samples) {
  OrbitOptimalityReport rep;
  rep.n_pairs = n_pairs;
  rep.n_orbit_samples = n_orbit_samples;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  rep.max_dist_deficit = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < n_pairs; ++p) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(p)));
    const Element c = inst.sample(rng);
    const Element u = inst.sample(rng);
    const SpecPoint q = inst.lambda(u);
    const SpecPoint lc = inst.lambda(c);
    const double target = lc.dot(q);
    const double target_dist = (lc - q).norm();
    const double nc = inst.norm_v(c);
    const double nu = inst.norm_v(u);

    double best = inst.inner_v(c, u);
    double closest = inst.norm_v(c - u);
    for (int s = 0; s < n_orbit_samples; ++s) {
      auto x = inst.sample_orbit(q, rng);
      if (!x) {
        rep.orbit_sampling_available = false;
        break;
      }
      best = std::max(best, inst.inner_v(c, *x));
      closest = std::min(closest, inst.norm_v(c - *x));
    }
    rep.max_excess = std::max(rep.max_excess, (best - target) / (1.0 + nc * nu));
    rep.max_dist_deficit = std::max(rep.max_dist_deficit, (target_dist - closest) / (1.0 + nc + nu));

    Witness w = inst.a3_witness(c, q);
    const double gap = w ? std::abs(inst.inner_v(c, *w.x) - target) : std::abs(w.gap);
    rep.max_witness_gap = std::max(rep.max_witness_gap, gap / (1.0 + nc * nu));
  }
  return rep;
}

CommutationSuiteReport commutation_suite(const FtvnSystem& inst, std::uint64_t seed, int n_pairs,
                                         double tol) {
  CommutationSuiteReport rep;
  for (int p = 0; p < n_pairs; ++p) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(p)));
    const Element x = inst.sample(rng);
    const SpecPoint q = inst.lambda(inst.sample(rng));
    Witness w = inst.a3_witness(x, q);
    if (!w) {
      ++rep.witness_failures;
    } else {
      ++rep.n_constructed;
      const CommutationCert cert = commute_check(inst, x, *w.x, tol);
      if (cert.verdict) ++rep.constructed_commuting;
      if (!cert.consistent()) ++rep.disagreements;
    }
    const Element y = inst.sample(rng);
    const Element z = inst.sample(rng);
    ++rep.n_generic;
    const CommutationCert cert = commute_check(inst, y, z, tol);
    if (cert.verdict) ++rep.generic_commuting;
    if (!cert.consistent()) ++rep.disagreements;
  }
  return rep;
}

}  // namespace ftvn
