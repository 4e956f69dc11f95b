#pragma once

#include "ftvn/types.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ftvn {

/// Outcome of an (A3) witness construction. `x` is empty on failure; `gap` is
/// the shortfall <lambda(c), q> - <c, x> of the best point found.
struct Witness {
  std::optional<Element> x;
  double gap = 0.0;
  std::string reason;

  explicit operator bool() const { return x.has_value(); }
  static Witness ok(Element e, double gap = 0.0) { return {std::move(e), gap, {}}; }
  static Witness fail(std::string why, double gap = 0.0) { return {std::nullopt, gap, std::move(why)}; }
};

/// Linear inequality <normal, q> <= offset on W.
struct Halfspace {
  SpecPoint normal;
  double offset = 0.0;
};

/// A realization of a Fan-Theobald-von Neumann system (V, W, lambda).
///
/// V is identified with R^dim_v() carrying the inner product inner_v(); W is
/// R^dim_w() with the Euclidean inner product. Implementations are immutable
/// after construction and safe to share across threads.
class FtvnSystem {
 public:
  virtual ~FtvnSystem() = default;

  virtual std::string name() const = 0;
  virtual Index dim_v() const = 0;
  virtual Index dim_w() const = 0;

  virtual double inner_v(const Element& x, const Element& y) const { return x.dot(y); }
  double inner_w(const SpecPoint& p, const SpecPoint& q) const { return p.dot(q); }
  double norm_v(const Element& x) const { return std::sqrt(std::max(0.0, inner_v(x, x))); }

  virtual SpecPoint lambda(const Element& x) const = 0;

  /// Element x with lambda(x) = q and <c, x> = <lambda(c), q>, or a failure.
  virtual Witness a3_witness(const Element& c, const SpecPoint& q) const = 0;
  /// True when a3_witness is a closed-form construction rather than a search.
  virtual bool witness_is_exact() const = 0;

  /// Membership q in lambda(V).
  virtual bool in_image(const SpecPoint& q, double tol) const = 0;
  /// Polyhedral description of lambda(V); empty means all of W.
  virtual std::vector<Halfspace> image_cone() const { return {}; }

  virtual Element sample(Rng& rng) const { return gaussian_vector(dim_v(), rng); }
  /// Random point of the orbit {x : lambda(x) = q}, when the instance can draw one.
  virtual std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const;
  /// All points of a finite orbit, when the instance can enumerate it.
  virtual std::optional<std::vector<Element>> enumerate_orbit(const SpecPoint& q) const;
  /// Shared frame / simultaneous decomposition for a commuting pair, if the
  /// instance can express one. Null otherwise.
  virtual nlohmann::json commutation_witness(const Element& x, const Element& y) const;

  void require_element(const Element& x, const char* what = "element") const;
  void require_point(const SpecPoint& q, const char* what = "spectral point") const;
};

using SystemPtr = std::shared_ptr<const FtvnSystem>;

/// Standard cone q_1 >= q_2 >= ... >= q_n as halfspaces q_{i+1} - q_i <= 0.
std::vector<Halfspace> nonincreasing_cone(Index n);

}  // namespace ftvn
