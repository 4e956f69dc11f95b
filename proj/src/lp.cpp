#include "ftvn/lp.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace ftvn {

namespace {

constexpr double kPivotEps = 1e-11;

enum class Outcome { Optimal, Unbounded, IterationLimit };

// Tableau rows 0..m-1 are constraints, row m holds reduced costs z_j - c_j;
// the last column is the right-hand side.
struct Tableau {
  Matrix t;
  std::vector<Index> basis;
  Index rows() const { return static_cast<Index>(basis.size()); }
  Index cols() const { return t.cols() - 1; }

  void pivot(Index r, Index c) {
    t.row(r) /= t(r, c);
    for (Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  void set_objective(const Eigen::VectorXd& cost) {
    const Index m = rows();
    t.row(m).setZero();
    t.row(m).head(cols()) = -cost.transpose();
    for (Index i = 0; i < m; ++i) {
      const double cb = cost[basis[static_cast<std::size_t>(i)]];
      if (cb != 0.0) t.row(m) += cb * t.row(i);
    }
  }

  // Maximizes with Bland's rule over columns [0, allowed).
  Outcome run(Index allowed, int max_iterations, int& iterations) {
    const Index m = rows();
    const Index rhs = cols();
    while (iterations < max_iterations) {
      Index enter = -1;
      for (Index j = 0; j < allowed; ++j) {
        if (t(m, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::Optimal;
      Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        if (t(i, enter) <= kPivotEps) continue;
        const double ratio = t(i, rhs) / t(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-12) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12 &&
                   basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      pivot(leave, enter);
      ++iterations;
    }
    return Outcome::IterationLimit;
  }
};

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& obj, const Matrix& a, const Eigen::VectorXd& b,
                  int max_iterations) {
  const Index n = obj.size();
  const Index m = a.rows();
  if (a.cols() != n || b.size() != m) throw DimensionMismatch("solve_lp: inconsistent shapes");

  // Columns: x+ (n), x- (n), slacks (m), artificials (one per negative rhs).
  std::vector<Index> negative_rows;
  for (Index i = 0; i < m; ++i)
    if (b[i] < 0.0) negative_rows.push_back(i);
  const Index n_art = static_cast<Index>(negative_rows.size());
  const Index n_real = 2 * n + m;
  const Index n_cols = n_real + n_art;

  Tableau tab;
  tab.t = Matrix::Zero(m + 1, n_cols + 1);
  tab.basis.assign(static_cast<std::size_t>(m), 0);
  Index art = 0;
  for (Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n) = sign * a.row(i);
    tab.t.block(i, n, 1, n) = -sign * a.row(i);
    tab.t(i, 2 * n + i) = sign;
    tab.t(i, n_cols) = sign * b[i];
    if (b[i] < 0.0) {
      tab.t(i, n_real + art) = 1.0;
      tab.basis[static_cast<std::size_t>(i)] = n_real + art;
      ++art;
    } else {
      tab.basis[static_cast<std::size_t>(i)] = 2 * n + i;
    }
  }

  LpResult res;
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_cols);
    phase1.tail(n_art).setConstant(-1.0);
    tab.set_objective(phase1);
    tab.run(n_cols, max_iterations, res.iterations);
    const double infeasibility = -tab.t(m, n_cols);
    if (infeasibility > 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Index i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < n_real) continue;
      for (Index j = 0; j < n_real; ++j) {
        if (std::abs(tab.t(i, j)) > kPivotEps) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_cols);
  cost.head(n) = obj;
  cost.segment(n, n) = -obj;
  tab.set_objective(cost);
  const Outcome out = tab.run(n_real, max_iterations, res.iterations);
  if (out == Outcome::Unbounded) {
    res.status = LpStatus::Unbounded;
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  if (out == Outcome::IterationLimit) throw Error("solve_lp: iteration limit reached");

  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_cols);
  for (Index i = 0; i < m; ++i) full[tab.basis[static_cast<std::size_t>(i)]] = tab.t(i, n_cols);
  res.x = full.head(n) - full.segment(n, n);
  res.value = obj.dot(res.x);
  res.status = LpStatus::Optimal;
  return res;
}

}  // namespace ftvn
