#include "ftvn/types.hpp"

#include <algorithm>
#include <functional>

namespace ftvn {

Eigen::VectorXd sort_desc(const Eigen::VectorXd& q) {
  Eigen::VectorXd out = q;
  std::sort(out.data(), out.data() + out.size(), std::greater<>());
  return out;
}

Eigen::VectorXd sort_asc(const Eigen::VectorXd& q) {
  Eigen::VectorXd out = q;
  std::sort(out.data(), out.data() + out.size());
  return out;
}

bool is_nonincreasing(const Eigen::VectorXd& q, double tol) {
  for (Index i = 0; i + 1 < q.size(); ++i) {
    if (q[i + 1] > q[i] + tol) return false;
  }
  return true;
}

Matrix random_orthogonal(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j) g.col(j) = gaussian_vector(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign fix on diag(R) makes the distribution Haar.
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace ftvn
