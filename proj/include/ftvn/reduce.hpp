#pragma once

#include "ftvn/core.hpp"
#include "ftvn/spectral_set.hpp"

#include <cstdint>
#include <functional>

namespace ftvn {

enum class Sense { Min, Max };

/// L(a, b), strictly increasing in the first argument.
class Combiner {
 public:
  enum class Kind { Sum, Product, Custom };

  static Combiner sum();
  static Combiner product();
  static Combiner custom(std::string name, std::function<double(double, double)> fn);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double a, double b) const { return fn_(a, b); }

  /// Strict increase in the first argument on a 17-point probe grid over
  /// [lo, hi] at each given second argument. Throws ContractError otherwise.
  void verify_monotone(double lo, double hi, const std::vector<double>& second) const;

 private:
  Combiner(Kind kind, std::string name, std::function<double(double, double)> fn);
  Kind kind_;
  std::string name_;
  std::function<double(double, double)> fn_;
};

/// phi on W; the spectral function is Phi = phi o lambda.
struct SpectralFunctionSpec {
  std::string kind = "zero";
  std::function<double(const SpecPoint&)> phi;
  bool convex = true;
  bool permutation_invariant = true;
  /// Set when phi(q) = <gradient, q> + offset.
  std::optional<SpecPoint> linear_gradient;
  double linear_offset = 0.0;

  double operator()(const SpecPoint& q) const { return phi(q); }

  static SpectralFunctionSpec zero();
  static SpectralFunctionSpec linear(SpecPoint gradient, double offset = 0.0);
  /// -sum log q_i, +inf off the positive orthant.
  static SpectralFunctionSpec neg_logdet();
  /// Values at tabulated points; lookups are by sorted coordinates within tol.
  static SpectralFunctionSpec table(PointSet points, std::vector<double> values, double tol = 1e-9);
};

struct AffinePiece {
  Element c;
  double alpha = 0.0;
};

/// f(x) = <c,x>, g(x) = ||c - x||, or h(x) = max_i <c_i,x> + alpha_i.
struct Objective {
  enum class Kind { Linear, Distance, MaxAffine };
  Kind kind = Kind::Linear;
  Element c;
  std::vector<AffinePiece> pieces;

  static Objective linear(Element c);
  static Objective distance(Element c);
  static Objective max_affine(std::vector<AffinePiece> pieces);
  double operator()(const FtvnSystem& inst, const Element& x) const;
};

struct SolveOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = 42;
  int starts = 32;
};

struct SolveReport {
  bool feasible = true;
  double optimal_value = 0.0;
  SpecPoint optimizer_w;
  Element optimizer_v;
  double value_v = 0.0;
  double reduction_gap = 0.0;  // |value at optimizer_v - optimal_value|
  bool attained = false;
  /// The element the lifted optimizer is certified against: "c", "-c", or "none".
  std::string commutes_with = "none";
  CommutationCert commutation;
  std::string method;
  int iterations = 0;
  std::vector<std::string> trace;
};

/// sup/inf of L(obj, Phi) over E = lambda^{-1}(Q) through the reduced problem
/// over lambda(E), followed by lifting and a commutation certificate.
SolveReport reduce_solve(const FtvnSystem& inst, const Objective& obj, const SpectralSetSpec& set,
                         const SpectralFunctionSpec& phi, const Combiner& comb, Sense sense,
                         const SolveOptions& opts = {});

SolveReport reduce_solve_linear(const FtvnSystem& inst, const Element& c, const SpectralSetSpec& set,
                                const SpectralFunctionSpec& phi, const Combiner& comb, Sense sense,
                                const SolveOptions& opts = {});

SolveReport reduce_solve_distance(const FtvnSystem& inst, const Element& c,
                                  const SpectralSetSpec& set, const SpectralFunctionSpec& phi,
                                  const Combiner& comb, Sense sense, const SolveOptions& opts = {});

/// max/min <c,x> over the orbit [u].
SolveReport orbit_linear(const FtvnSystem& inst, const Element& c, const Element& u, Sense sense,
                         double tol = kDefaultTol);
/// min/max ||c - x|| over the orbit [u].
SolveReport orbit_distance(const FtvnSystem& inst, const Element& c, const Element& u, Sense sense,
                           double tol = kDefaultTol);

struct IntervalImage {
  double delta = 0.0;  // inf <c,x> over E
  double Delta = 0.0;  // sup <c,x> over E
  Element lower_witness;  // commutes with -c
  Element upper_witness;  // commutes with c
  CommutationCert lower_cert;
  CommutationCert upper_cert;
  int sampled = 0;
  double sampled_excess = 0.0;  // how far sampled values leave [delta, Delta]
};

IntervalImage interval_image(const FtvnSystem& inst, const Element& c, const SpectralSetSpec& set,
                             std::uint64_t seed = 42, int samples = 200, double tol = kDefaultTol);

double hausdorff(const PointSet& a, const PointSet& b);
/// d_H(lambda(E), lambda(F)) for finite specs.
double hausdorff_spectral(const FtvnSystem& inst, const SpectralSetSpec& e, const SpectralSetSpec& f);
/// d_H(E, F) computed on enumerated V-side elements; nullopt when E or F cannot be enumerated.
std::optional<double> hausdorff_ambient(const FtvnSystem& inst, const SpectralSetSpec& e,
                                        const SpectralSetSpec& f);

}  // namespace ftvn
