#include "ftvn/core.hpp"

namespace ftvn {

SpecPoint lambda_tilde(const FtvnSystem& inst, const Element& c) {
  inst.require_element(c);
  return -inst.lambda(-c);
}

CommutationCert commute_check(const FtvnSystem& inst, const Element& x, const Element& y,
                              double tol) {
  inst.require_element(x, "x");
  inst.require_element(y, "y");
  if (!(tol > 0.0)) throw ContractError("commute_check: tol must be positive");

  const SpecPoint lx = inst.lambda(x);
  const SpecPoint ly = inst.lambda(y);
  const SpecPoint lsum = inst.lambda(x + y);
  const double nx = inst.norm_v(x);
  const double ny = inst.norm_v(y);

  CommutationCert cert;
  cert.tol = tol;
  cert.residual_inner = std::abs(inst.inner_v(x, y) - lx.dot(ly));
  cert.residual_dist = std::abs((lx - ly).norm() - inst.norm_v(x - y));
  cert.residual_addnorm = std::abs(lsum.norm() - (lx + ly).norm());
  cert.residual_addvec = (lsum - (lx + ly)).norm();

  const double additive_scale = 1.0 + nx + ny;
  cert.pass_inner = cert.residual_inner <= tol * (1.0 + nx * ny);
  cert.pass_dist = cert.residual_dist <= tol * additive_scale;
  cert.pass_addnorm = cert.residual_addnorm <= tol * additive_scale;
  cert.pass_addvec = cert.residual_addvec <= tol * additive_scale;
  cert.verdict = cert.pass_inner;
  if (cert.verdict) cert.witness = inst.commutation_witness(x, y);
  return cert;
}

SublinearityGap sublinearity_gap(const FtvnSystem& inst, const Element& c, const Element& x,
                                 const Element& y) {
  inst.require_element(c, "c");
  inst.require_element(x, "x");
  inst.require_element(y, "y");
  const SpecPoint lc = inst.lambda(c);
  const SpecPoint lx = inst.lambda(x);
  const SpecPoint ly = inst.lambda(y);
  const SpecPoint lsum = inst.lambda(x + y);
  return {lc.dot(lx) + lc.dot(ly) - lc.dot(lsum), (lx + ly).norm() - lsum.norm()};
}

Element cone_sum_witness(const FtvnSystem& inst, const Element& u, const Element& v) {
  inst.require_element(u, "u");
  inst.require_element(v, "v");
  if (!inst.witness_is_exact()) {
    throw ContractError("cone_sum_witness: " + inst.name() + " has no exact (A3) witness");
  }
  Witness w = inst.a3_witness(v, inst.lambda(u));
  if (!w) throw ContractError("cone_sum_witness: witness failed: " + w.reason);
  return *w.x + v;
}

}  // namespace ftvn
