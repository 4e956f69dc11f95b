#pragma once

#include "ftvn/system.hpp"

namespace ftvn {

/// lambda~(c) = -lambda(-c).
SpecPoint lambda_tilde(const FtvnSystem& inst, const Element& c);

/// Residuals of the four equivalent commutation conditions for a pair (x, y).
struct CommutationCert {
  double residual_inner = 0.0;    // |<x,y> - <lambda(x),lambda(y)>|
  double residual_dist = 0.0;     // | ||lambda(x)-lambda(y)|| - ||x-y|| |
  double residual_addnorm = 0.0;  // | ||lambda(x+y)|| - ||lambda(x)+lambda(y)|| |
  double residual_addvec = 0.0;   // ||lambda(x+y) - lambda(x) - lambda(y)||
  /// Per-condition verdicts, each at its own scaled threshold.
  bool pass_inner = false;
  bool pass_dist = false;
  bool pass_addnorm = false;
  bool pass_addvec = false;
  bool verdict = false;
  double tol = kDefaultTol;
  nlohmann::json witness;

  /// The four conditions agree, as they must in an FTvN system.
  bool consistent() const {
    return pass_inner == pass_dist && pass_dist == pass_addnorm && pass_addnorm == pass_addvec;
  }
};

/// Commutation test. The verdict follows the inner-product residual
/// <= tol * (1 + ||x|| ||y||); the other three are recorded alongside with
/// thresholds tol * (1 + ||x|| + ||y||).
CommutationCert commute_check(const FtvnSystem& inst, const Element& x, const Element& y,
                              double tol = kDefaultTol);

struct SublinearityGap {
  /// <lambda(c),lambda(x)> + <lambda(c),lambda(y)> - <lambda(c),lambda(x+y)>
  double support = 0.0;
  /// ||lambda(x)+lambda(y)|| - ||lambda(x+y)||
  double norm = 0.0;
};

SublinearityGap sublinearity_gap(const FtvnSystem& inst, const Element& c, const Element& x,
                                 const Element& y);

/// z with lambda(z) = lambda(u) + lambda(v), built as a3_witness(v, lambda(u)) + v.
/// Throws ContractError when the instance's witness is not exact or fails.
Element cone_sum_witness(const FtvnSystem& inst, const Element& u, const Element& v);

}  // namespace ftvn
