#pragma once

#include "ftvn/core.hpp"

#include <cstdint>
#include <optional>

namespace ftvn {

/// Worst-case violations of the FTvN axioms and their first consequences over a
/// seeded sample stream. Violations are relative: each gap is divided by
/// 1 + (natural scale of the quantity). Failures are recorded, never thrown.
struct AxiomReport {
  std::string instance;
  std::uint64_t seed = 0;
  int n_samples = 0;
  double tol = kDefaultTol;

  double a1_max = 0.0;           // | ||lambda(x)|| - ||x|| |
  double a2_min = 0.0;           // min <lambda(x),lambda(y)> - <x,y>, must be >= -tol
  double a3_lambda_max = 0.0;    // ||lambda(w) - q|| for returned witnesses w
  double a3_inner_max = 0.0;     // |<c,w> - <lambda(c),q>|
  int a3_failures = 0;           // witness searches that reported failure
  double a3_gap_max = 0.0;       // largest reported shortfall
  std::optional<std::pair<Element, SpecPoint>> a3_failing_pair;
  double homogeneity_max = 0.0;  // ||lambda(a x) - a lambda(x)||, a >= 0
  double sandwich_min = 0.0;     // min of <c,x> - <lambda~(c),lambda(x)> and <lambda(c),lambda(x)> - <c,x>
  double lipschitz_min = 0.0;    // min of ||c-x|| - ||lambda(c)-lambda(x)|| and ||lambda~(c)-lambda(x)|| - ||c-x||
  double commute_rate = 0.0;     // fraction of sampled (x, y) pairs that commute

  bool a1_pass() const { return a1_max <= tol; }
  bool a2_pass() const { return a2_min >= -tol; }
  bool a3_pass() const {
    return a3_failures == 0 && a3_lambda_max <= tol && a3_inner_max <= tol;
  }
  bool homogeneity_pass() const { return homogeneity_max <= tol; }
  bool sandwich_pass() const { return sandwich_min >= -tol && lipschitz_min >= -tol; }
  bool pass() const {
    return a1_pass() && a2_pass() && a3_pass() && homogeneity_pass() && sandwich_pass();
  }
};

AxiomReport axiom_suite(const FtvnSystem& inst, std::uint64_t seed, int n_samples,
                        double tol = kDefaultTol);

/// Sampled orbit-optimality check: for random (c, u), no sampled orbit point of
/// u beats <lambda(c),lambda(u)> and the witness attains it.
struct OrbitOptimalityReport {
  int n_pairs = 0;
  int n_orbit_samples = 0;
  double max_excess = 0.0;      // max over pairs of (sampled max <c,x>) - <lambda(c),lambda(u)>, relative
  double max_witness_gap = 0.0; // max |<c,w> - <lambda(c),lambda(u)>|, relative
  double max_dist_deficit = 0.0;  // max of ||lambda(c)-lambda(u)|| - (sampled min ||c-x||), relative
  bool orbit_sampling_available = true;
};

OrbitOptimalityReport orbit_optimality_suite(const FtvnSystem& inst, std::uint64_t seed,
                                             int n_pairs, int n_orbit_samples);

/// Agreement of the four commutation conditions on constructed-commuting pairs
/// (y = a3_witness(x, q)) and on generic random pairs.
struct CommutationSuiteReport {
  int n_constructed = 0;
  int n_generic = 0;
  int constructed_commuting = 0;
  int generic_commuting = 0;
  int disagreements = 0;
  int witness_failures = 0;
};

CommutationSuiteReport commutation_suite(const FtvnSystem& inst, std::uint64_t seed, int n_pairs,
                                         double tol = 1e-7);

}  // namespace ftvn
