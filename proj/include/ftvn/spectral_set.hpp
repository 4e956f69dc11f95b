#pragma once

#include "ftvn/perm.hpp"
#include "ftvn/system.hpp"

#include <functional>
#include <variant>

namespace ftvn {

/// Q given by finitely many points.
struct FiniteSet {
  PointSet points;
};

/// {q : <a_i, q> <= b_i} intersected with the nonincreasing cone and with
/// the instance's image cone.
struct OrderedPolyhedron {
  std::vector<Halfspace> halfspaces;
};

/// The orbit [u], so lambda(E) = {lambda(u)}.
struct OrbitOf {
  Element u;
};

/// Q given by a membership predicate, scanned on a uniform grid over a box.
struct GridOracle {
  std::function<bool(const SpecPoint&)> membership;
  SpecPoint lower;
  SpecPoint upper;
  int resolution = 33;
};

/// Symbolic description of Q defining the spectral set E = lambda^{-1}(Q).
struct SpectralSetSpec {
  std::variant<FiniteSet, OrderedPolyhedron, OrbitOf, GridOracle> shape;
  bool permutation_invariant = false;

  static SpectralSetSpec finite(PointSet points, bool permutation_invariant = false);
  static SpectralSetSpec polyhedron(std::vector<Halfspace> halfspaces);
  static SpectralSetSpec orbit(Element u);
  static SpectralSetSpec grid(std::function<bool(const SpecPoint&)> membership, SpecPoint lower,
                              SpecPoint upper, int resolution);

  bool is_finite() const {
    return std::holds_alternative<FiniteSet>(shape) || std::holds_alternative<OrbitOf>(shape);
  }
};

/// lambda(E) = Q intersect lambda(V) for finite and orbit specs, or the scanned
/// grid points for oracles. Throws ContractError for polyhedra.
PointSet image_points(const FtvnSystem& inst, const SpectralSetSpec& set, double tol = kSetTol);

/// All constraints of lambda(E) for a polyhedral spec: the user halfspaces, the
/// nonincreasing cone and the instance's image cone.
std::vector<Halfspace> polyhedron_constraints(const FtvnSystem& inst, const OrderedPolyhedron& poly);

/// q in lambda(E).
bool image_contains(const FtvnSystem& inst, const SpectralSetSpec& set, const SpecPoint& q,
                    double tol = 1e-9);

/// x in E, i.e. lambda(x) in lambda(E).
bool set_contains(const FtvnSystem& inst, const SpectralSetSpec& set, const Element& x,
                  double tol = 1e-9);

/// Every element of E when E is finite and the instance enumerates orbits.
std::optional<std::vector<Element>> enumerate_set(const FtvnSystem& inst, const SpectralSetSpec& set);

/// Random element of E, or nullopt when none can be drawn.
std::optional<Element> sample_set(const FtvnSystem& inst, const SpectralSetSpec& set, Rng& rng);

}  // namespace ftvn
