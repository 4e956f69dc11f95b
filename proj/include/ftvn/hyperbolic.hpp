#pragma once

#include "ftvn/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace ftvn {

class NonHyperbolic : public Error {
 public:
  using Error::Error;
};

class DegenerateLeadingCoefficient : public Error {
 public:
  using Error::Error;
};

struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
};

/// Homogeneous polynomial p of degree n on R^dim, given as a black-box
/// evaluator, together with a direction e with p(e) != 0.
class HyperbolicPolynomial {
 public:
  using Evaluator = std::function<double(const Element&)>;

  HyperbolicPolynomial(std::string name, Index dim, int degree, Evaluator eval, Element direction);

  const std::string& name() const { return name_; }
  Index dim() const { return dim_; }
  int degree() const { return degree_; }
  const Element& direction() const { return direction_; }
  double operator()(const Element& x) const { return eval_(x); }

 private:
  std::string name_;
  Index dim_;
  int degree_;
  Evaluator eval_;
  Element direction_;
};

/// prod_i x_i on R^n; e defaults to (1, ..., 1).
HyperbolicPolynomial coordinate_product(Index n, std::optional<Element> e = std::nullopt);
/// det on Sym(n) in orthonormal svec coordinates (diagonal entries, then
/// sqrt(2) * off-diagonal entries row by row); e = svec(I).
HyperbolicPolynomial det_sym(Index n);
/// sum_k coef_k prod_j x_j^powers_kj; every monomial must have the same total degree.
HyperbolicPolynomial custom_monomials(Index dim, std::vector<Monomial> monomials, Element e);

Element svec(const Matrix& m);
Matrix smat(const Element& v, Index n);

/// Roots of t -> p(t e - x), sorted nonincreasing. Coefficients come from a
/// Vandermonde solve at Chebyshev nodes scaled by 1 + ||x||; roots are the
/// companion-matrix eigenvalues with clusters from multiple roots averaged.
SpecPoint hyp_lambda(const HyperbolicPolynomial& hp, const Element& x);

struct CompletenessReport {
  int restarts = 0;
  double min_ratio = 0.0;               // min ||lambda(x)|| / ||x|| found
  std::optional<Element> null_vector;   // x != 0 with lambda(x) ~ 0
  bool violation_found() const { return null_vector.has_value(); }
};

/// Random restarts of a local descent on ||lambda(x)|| over the unit sphere.
CompletenessReport completeness_check(const HyperbolicPolynomial& hp, std::uint64_t seed,
                                      int n_samples);

/// FTvN system induced by a complete hyperbolic polynomial. The inner product
/// is the polarization of ||x|| := ||lambda(x)||, materialized as a Gram
/// matrix over the coordinate basis. Construction fails with ContractError when
/// the parallelogram law is violated.
class HyperbolicSystem final : public FtvnSystem {
 public:
  explicit HyperbolicSystem(HyperbolicPolynomial hp, std::uint64_t seed = 7);
  std::string name() const override { return "hyp:" + hp_.name(); }
  Index dim_v() const override { return hp_.dim(); }
  Index dim_w() const override { return hp_.degree(); }
  double inner_v(const Element& x, const Element& y) const override { return x.dot(gram_ * y); }
  SpecPoint lambda(const Element& x) const override { return hyp_lambda(hp_, x); }
  /// Levenberg-Marquardt multistart on lambda(x) = q, lambda(x+c) = lambda(c) + q.
  Witness a3_witness(const Element& c, const SpecPoint& q) const override;
  bool witness_is_exact() const override { return false; }
  bool in_image(const SpecPoint& q, double tol) const override;
  std::vector<Halfspace> image_cone() const override { return nonincreasing_cone(dim_w()); }

  const HyperbolicPolynomial& polynomial() const { return hp_; }
  const Matrix& gram() const { return gram_; }
  double parallelogram_residual() const { return parallelogram_residual_; }

  /// Best point of the orbit {x : lambda(x) = lambda(z)} additively aligned
  /// with y, with residual ||lambda(x) - lambda(z)|| + ||lambda(x+y) - lambda(x) - lambda(y)||.
  struct OrbitSearch {
    Element x;
    double residual = 0.0;
  };
  OrbitSearch aligned_orbit_point(const Element& y, const SpecPoint& target, Rng& rng,
                                  int starts = 8) const;

 private:
  HyperbolicPolynomial hp_;
  Matrix gram_;
  double parallelogram_residual_ = 0.0;
};

struct IsometricReport {
  std::vector<double> gaps;
  double max_gap = 0.0;
  int falsification_candidates = 0;  // samples whose gap stayed above tol
  double parallelogram_residual = 0.0;
};

/// Best additivity residual found for one pair: min over the orbit of z of
/// ||lambda(x+y) - lambda(x) - lambda(y)|| (plus the orbit penalty). Zero for y = 0.
double isometric_gap(const HyperbolicSystem& sys, const Element& y, const Element& z, Rng& rng);

/// Searches for counterexamples to the isometric property: for sampled (y, z)
/// a point x of z's orbit with lambda(x+y) = lambda(x) + lambda(y). A gap left
/// above tol is a candidate, not a proof.
IsometricReport isometric_falsify(const HyperbolicSystem& sys, std::uint64_t seed, int n_samples,
                                  double tol);

}  // namespace ftvn
