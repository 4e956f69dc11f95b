#include "ftvn/envelope.hpp"

#include <limits>

namespace ftvn {

double max_affine_value(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces, const Element& x) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) v = std::max(v, inst.inner_v(p.c, x) + p.alpha);
  return v;
}

double convex_envelope_upper(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces,
                             const SpecPoint& q) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) v = std::max(v, inst.lambda(p.c).dot(q) + p.alpha);
  return v;
}

double convex_envelope_lower_star(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces,
                                  const SpecPoint& q) {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) v = std::max(v, lambda_tilde(inst, p.c).dot(q) + p.alpha);
  return v;
}

LowerEnvelope convex_envelope_lower(const FtvnSystem& inst, const std::function<double(const Element&)>& h,
                                    const SpecPoint& q, int budget, std::uint64_t seed) {
  LowerEnvelope out;
  out.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const Element& x) {
    ++out.evaluations;
    const double v = h(x);
    if (v < out.value) {
      out.value = v;
      out.argmin = x;
    }
  };

  if (auto orbit = inst.enumerate_orbit(q)) {
    for (const auto& x : *orbit) consider(x);
    out.exact = true;
    return out;
  }

  Rng rng(seed);
  for (int s = 0; s < budget; ++s) {
    auto x = inst.sample_orbit(q, rng);
    if (!x) throw ContractError("convex_envelope_lower: instance '" + inst.name() + "' cannot sample orbits");
    consider(*x);
  }
  // Local moves: resample the orbit near the incumbent by mixing and re-snapping
  // through a witness aligned with the perturbed point.
  const int refine = budget / 4;
  double radius = 0.1 * (1.0 + q.norm());
  for (int s = 0; s < refine; ++s) {
    const Element probe = out.argmin + radius * inst.sample(rng);
    Witness w = inst.a3_witness(probe, q);
    if (w) consider(*w.x);
    if (s % 50 == 49) radius *= 0.5;
  }
  return out;
}

}  // namespace ftvn
