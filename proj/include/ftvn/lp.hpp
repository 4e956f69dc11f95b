#pragma once

#include "ftvn/types.hpp"

namespace ftvn {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
};

/// maximize <obj, x> subject to A x <= b with x free. Dense two-phase primal
/// simplex on a tableau, Bland's rule for entering and leaving variables.
LpResult solve_lp(const Eigen::VectorXd& obj, const Matrix& a, const Eigen::VectorXd& b,
                  int max_iterations = 10000);

}  // namespace ftvn
