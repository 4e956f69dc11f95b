#pragma once

#include "ftvn/system.hpp"

namespace ftvn {

/// Euclidean projection onto {q : q_1 >= q_2 >= ... >= q_n} by pool-adjacent-violators.
Eigen::VectorXd project_nonincreasing(const Eigen::VectorXd& y);

Eigen::VectorXd project_halfspace(const Eigen::VectorXd& y, const Halfspace& h);

struct DykstraResult {
  Eigen::VectorXd point;
  int sweeps = 0;
  bool converged = false;
  double max_violation = 0.0;
};

/// Projection onto the intersection of halfspaces (and the nonincreasing cone
/// when `ordered`) by Dykstra's alternating projections.
DykstraResult dykstra_project(const Eigen::VectorXd& y, const std::vector<Halfspace>& halfspaces,
                              bool ordered, int max_sweeps = 10000, double step_tol = 1e-10);

}  // namespace ftvn
