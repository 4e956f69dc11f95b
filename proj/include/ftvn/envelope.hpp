#pragma once

#include "ftvn/reduce.hpp"

namespace ftvn {

double max_affine_value(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces,
                        const Element& x);

/// h^*(q) = max_i <lambda(c_i), q> + alpha_i = max{h(x) : lambda(x) = q}.
double convex_envelope_upper(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces,
                             const SpecPoint& q);

/// h_*(q) = max_i <lambda~(c_i), q> + alpha_i, a convex minorant of h_**.
double convex_envelope_lower_star(const FtvnSystem& inst, const std::vector<AffinePiece>& pieces,
                                  const SpecPoint& q);

struct LowerEnvelope {
  double value = 0.0;
  Element argmin;
  bool exact = false;  // full orbit enumeration rather than sampling
  int evaluations = 0;
};

/// h_**(q) = min{h(x) : lambda(x) = q}: exact over enumerable orbits,
/// otherwise best of `budget` orbit samples refined by local random moves.
LowerEnvelope convex_envelope_lower(const FtvnSystem& inst,
                                    const std::function<double(const Element&)>& h,
                                    const SpecPoint& q, int budget = 2000, std::uint64_t seed = 42);

}  // namespace ftvn
