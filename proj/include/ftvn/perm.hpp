#pragma once

#include "ftvn/types.hpp"

#include <vector>

namespace ftvn {

using PointSet = std::vector<Eigen::VectorXd>;

inline constexpr double kSetTol = 1e-12;
inline constexpr Index kMaxOrbitDim = 8;

/// Deduplicates points (max-norm distance <= tol), keeping first occurrences.
PointSet dedupe(const PointSet& pts, double tol = kSetTol);

/// Q intersect Q-down: the points of Q that are already sorted nonincreasing.
PointSet q_cap_qdown(const PointSet& q, double tol = kSetTol);

/// Q-down: the nonincreasing rearrangements of the points of Q.
PointSet q_down(const PointSet& q, double tol = kSetTol);

/// Sigma_n(Q): every coordinate permutation of every point of Q. Dimension is
/// capped at kMaxOrbitDim; larger inputs throw ContractError.
PointSet sigma_orbit(const PointSet& q, double tol = kSetTol);

bool contains(const PointSet& set, const Eigen::VectorXd& p, double tol = kSetTol);

}  // namespace ftvn
