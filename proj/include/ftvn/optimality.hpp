#pragma once

#include "ftvn/reduce.hpp"

namespace ftvn {

using VectorField = std::function<Element(const Element&)>;
using ScalarField = std::function<double(const Element&)>;

struct ViReport {
  bool a_in_set = false;
  /// min over x in E of <G(a), x - a>; negative means a does not solve the VI.
  double vi_residual = 0.0;
  bool residual_exact = false;  // E was enumerated rather than sampled
  Element worst_x;
  CommutationCert commutation;  // a versus -G(a)
  /// VI solved (residual >= -tol on an enumerated E) implies commutation.
  bool contract_holds = true;
};

ViReport vi_commutation_check(const FtvnSystem& inst, const VectorField& g,
                              const SpectralSetSpec& set, const Element& a, double tol = kDefaultTol,
                              std::uint64_t seed = 42, int samples = 1000);

/// Central-difference gradient with step fd_step * (1 + ||a||).
Element fd_gradient(const ScalarField& h, const Element& a, double fd_step);

struct LocalMinReport {
  Element gradient;
  CommutationCert commutation;  // a versus -h'(a)
  int probes = 0;
  int probe_violations = 0;     // points (1-t)a + t x in E with h below h(a)
  double worst_drop = 0.0;
};

LocalMinReport local_min_commutation_check(const FtvnSystem& inst, const ScalarField& h,
                                           const SpectralSetSpec& set, const Element& a,
                                           double fd_step = 1e-6, std::uint64_t seed = 42,
                                           int n_probes = 64, double tol = kDefaultTol);

struct SubdiffReport {
  std::vector<std::size_t> active;
  bool found = false;
  Element c;  // convex combination of the active c_i
  std::vector<double> weights;
  CommutationCert commutation;  // a versus -c
};

/// Searches convex combinations of the active pieces of h at a (simplex grid
/// with step 1/32) for c in the subdifferential with a and -c commuting.
SubdiffReport subdiff_min_commutation_check(const FtvnSystem& inst,
                                            const std::vector<AffinePiece>& pieces,
                                            const SpectralSetSpec& set, const Element& a,
                                            double tol = kDefaultTol);

}  // namespace ftvn
