#include "ftvn/projection.hpp"

#include <vector>

namespace ftvn {

Eigen::VectorXd project_nonincreasing(const Eigen::VectorXd& y) {
  struct Block {
    double sum;
    Index size;
    double mean() const { return sum / static_cast<double>(size); }
  };
  std::vector<Block> blocks;
  for (Index i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      const Block last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().size += last.size;
    }
  }
  Eigen::VectorXd out(y.size());
  Index k = 0;
  for (const Block& b : blocks)
    for (Index j = 0; j < b.size; ++j) out[k++] = b.mean();
  return out;
}

Eigen::VectorXd project_halfspace(const Eigen::VectorXd& y, const Halfspace& h) {
  const double excess = h.normal.dot(y) - h.offset;
  const double nn = h.normal.squaredNorm();
  if (excess <= 0.0 || nn == 0.0) return y;
  return y - (excess / nn) * h.normal;
}

DykstraResult dykstra_project(const Eigen::VectorXd& y, const std::vector<Halfspace>& halfspaces,
                              bool ordered, int max_sweeps, double step_tol) {
  const std::size_t n_sets = halfspaces.size() + (ordered ? 1 : 0);
  std::vector<Eigen::VectorXd> increments(n_sets, Eigen::VectorXd::Zero(y.size()));
  DykstraResult res;
  Eigen::VectorXd x = y;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Eigen::VectorXd start = x;
    for (std::size_t k = 0; k < n_sets; ++k) {
      const Eigen::VectorXd shifted = x + increments[k];
      x = k < halfspaces.size() ? project_halfspace(shifted, halfspaces[k])
                                : project_nonincreasing(shifted);
      increments[k] = shifted - x;
    }
    res.sweeps = sweep + 1;
    if ((x - start).norm() <= step_tol * (1.0 + x.norm())) {
      res.converged = true;
      break;
    }
  }
  for (const Halfspace& h : halfspaces) {
    const double nn = h.normal.norm();
    if (nn > 0.0) res.max_violation = std::max(res.max_violation, (h.normal.dot(x) - h.offset) / nn);
  }
  if (ordered)
    for (Index i = 0; i + 1 < x.size(); ++i)
      res.max_violation = std::max(res.max_violation, x[i + 1] - x[i]);
  res.point = x;
  return res;
}

}  // namespace ftvn
