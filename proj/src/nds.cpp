#include "ftvn/nds.hpp"

#include "ftvn/jacobi.hpp"
#include "ftvn/perm.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <numeric>

namespace ftvn {

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

// Extends the first `filled` orthonormal columns of u to a full orthonormal set.
void complete_columns(Matrix& u, Index filled) {
  const Index m = u.rows();
  for (Index k = filled; k < u.cols(); ++k) {
    Eigen::VectorXd best;
    double best_norm = -1.0;
    for (Index e = 0; e < m; ++e) {
      Eigen::VectorXd v = Eigen::VectorXd::Unit(m, e);
      for (int pass = 0; pass < 2; ++pass)
        for (Index j = 0; j < k; ++j) v -= u.col(j).dot(v) * u.col(j);
      const double nv = v.norm();
      if (nv > best_norm) {
        best_norm = nv;
        best = v;
      }
    }
    u.col(k) = best / best_norm;
  }
}

}  // namespace

Svd jacobi_svd(const Matrix& x) {
  const Index m = x.rows();
  const Index n = x.cols();
  if (m < n) throw ContractError("jacobi_svd: expects rows >= cols");
  Matrix w = x;
  Matrix v = Matrix::Identity(n, n);
  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i + 1 < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double alpha = w.col(i).squaredNorm();
        const double beta = w.col(j).squaredNorm();
        const double gamma = w.col(i).dot(w.col(j));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd wi = w.col(i);
        w.col(i) = c * wi - s * w.col(j);
        w.col(j) = s * wi + c * w.col(j);
        const Eigen::VectorXd vi = v.col(i);
        v.col(i) = c * vi - s * v.col(j);
        v.col(j) = s * vi + c * v.col(j);
      }
    }
    if (!rotated) break;
  }

  Eigen::VectorXd norms(n);
  for (Index j = 0; j < n; ++j) norms[j] = w.col(j).norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return norms[a] > norms[b]; });

  Svd out;
  out.sigma.resize(n);
  out.u = Matrix::Zero(m, n);
  out.v.resize(n, n);
  const double cutoff = 1e-13 * (n ? norms.maxCoeff() : 0.0);
  Index filled = 0;
  for (Index k = 0; k < n; ++k) {
    const Index j = order[static_cast<std::size_t>(k)];
    out.sigma[k] = norms[j];
    out.v.col(k) = v.col(j);
    if (norms[j] > cutoff && norms[j] > 0.0) {
      out.u.col(k) = w.col(j) / norms[j];
      filled = k + 1;
    }
  }
  // Singular values at the cutoff are treated as zero for the left vectors only.
  complete_columns(out.u, filled);
  for (Index k = 0; k < n; ++k) {
    Index arg = 0;
    out.v.col(k).cwiseAbs().maxCoeff(&arg);
    if (out.v(arg, k) < 0.0) {
      out.v.col(k) = -out.v.col(k);
      out.u.col(k) = -out.u.col(k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

RectMatrixSpace::RectMatrixSpace(Index m, Index n) : m_(m), n_(n) {
  if (m < 1 || n < 1) throw ContractError("svd: dimensions must be positive");
  if (m < n) throw ContractError("svd: expects m >= n (transpose the problem)");
}

std::string RectMatrixSpace::name() const {
  return "svd:" + std::to_string(m_) + "x" + std::to_string(n_);
}

Matrix RectMatrixSpace::to_matrix(const Element& x) const {
  require_element(x);
  return unflatten(x, m_, n_);
}

Element RectMatrixSpace::from_matrix(const Matrix& m) const {
  if (m.rows() != m_ || m.cols() != n_) throw DimensionMismatch(name() + ": matrix has wrong shape");
  return flatten(m);
}

SpecPoint RectMatrixSpace::lambda(const Element& x) const { return jacobi_svd(to_matrix(x)).sigma; }

Matrix RectMatrixSpace::gamma_matrix(const Element& x) const {
  Matrix g = Matrix::Zero(m_, n_);
  const SpecPoint s = lambda(x);
  for (Index i = 0; i < n_; ++i) g(i, i) = s[i];
  return g;
}

Witness RectMatrixSpace::a3_witness(const Element& c, const SpecPoint& q) const {
  require_element(c, "c");
  require_point(q, "q");
  if (!is_nonincreasing(q, 0.0) || q[n_ - 1] < 0.0) {
    return Witness::fail("q must be nonnegative and nonincreasing");
  }
  const Svd svd = jacobi_svd(to_matrix(c));
  return Witness::ok(from_matrix(svd.u * q.asDiagonal() * svd.v.transpose()));
}

bool RectMatrixSpace::in_image(const SpecPoint& q, double tol) const {
  return q.size() == n_ && q.allFinite() && is_nonincreasing(q, tol) && q[n_ - 1] >= -tol;
}

std::vector<Halfspace> RectMatrixSpace::image_cone() const {
  auto cone = nonincreasing_cone(n_);
  SpecPoint last = SpecPoint::Zero(n_);
  last[n_ - 1] = -1.0;
  cone.push_back({last, 0.0});
  return cone;
}

std::optional<Element> RectMatrixSpace::sample_orbit(const SpecPoint& q, Rng& rng) const {
  const Matrix u = random_orthogonal(m_, rng);
  const Matrix v = random_orthogonal(n_, rng);
  return from_matrix(u.leftCols(n_) * q.asDiagonal() * v.transpose());
}

nlohmann::json RectMatrixSpace::commutation_witness(const Element& x, const Element& y) const {
  const Svd svd = jacobi_svd(to_matrix(x + y));
  const Matrix dx = svd.u.transpose() * to_matrix(x) * svd.v;
  const Matrix dy = svd.u.transpose() * to_matrix(y) * svd.v;
  const Eigen::VectorXd ax = dx.diagonal();
  const Eigen::VectorXd ay = dy.diagonal();
  const double residual = (dx - Matrix(ax.asDiagonal())).norm() + (dy - Matrix(ay.asDiagonal())).norm();
  return {{"kind", "simultaneous_svd"},
          {"sigma_x", std::vector<double>(ax.data(), ax.data() + ax.size())},
          {"sigma_y", std::vector<double>(ay.data(), ay.data() + ay.size())},
          {"residual", residual},
          {"u", matrix_json(svd.u)},
          {"v", matrix_json(svd.v)}};
}

SpecPoint singular_map(const RectMatrixSpace& space, const Element& x) { return space.lambda(x); }

Witness nds_a3_witness(const RectMatrixSpace& space, const Element& c, const SpecPoint& q) {
  return space.a3_witness(c, q);
}

CommutationCert nds_commute_check(const RectMatrixSpace& space, const Element& x, const Element& y,
                                  double tol) {
  return commute_check(space, x, y, tol);
}

// ---------------------------------------------------------------------------

RotationSystem::RotationSystem() : rotation_(2, 2) { rotation_ << 0.0, -1.0, 1.0, 0.0; }

Witness RotationSystem::a3_witness(const Element& c, const SpecPoint& q) const {
  require_element(c, "c");
  require_point(q, "q");
  return Witness::ok(rotation_.transpose() * q);
}

bool RotationSystem::in_image(const SpecPoint& q, double) const {
  return q.size() == 2 && q.allFinite();
}

std::optional<Element> RotationSystem::sample_orbit(const SpecPoint& q, Rng&) const {
  return Element(rotation_.transpose() * q);
}

std::optional<std::vector<Element>> RotationSystem::enumerate_orbit(const SpecPoint& q) const {
  return std::vector<Element>{rotation_.transpose() * q};
}

std::shared_ptr<const RotationSystem> rotation_instance() {
  return std::make_shared<const RotationSystem>();
}

// ---------------------------------------------------------------------------

SubspacePseudoInstance::SubspacePseudoInstance(const Matrix& spanning, int grid_points)
    : grid_points_(grid_points) {
  if (spanning.cols() != 2) throw ContractError("subspace instance: Z must be spanned by two vectors");
  if (grid_points < 16) throw ContractError("subspace instance: grid too coarse");
  Eigen::HouseholderQR<Matrix> qr(spanning);
  const Matrix r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
  if (std::abs(r(1, 1)) <= 1e-12 * std::abs(r(0, 0))) {
    throw ContractError("subspace instance: spanning vectors are dependent");
  }
  basis_ = qr.householderQ() * Matrix::Identity(spanning.rows(), 2);
}

SpecPoint SubspacePseudoInstance::lambda(const Element& z) const {
  require_element(z);
  return sort_desc(basis_ * z);
}

std::optional<std::vector<Element>> SubspacePseudoInstance::enumerate_orbit(const SpecPoint& q) const {
  if (q.size() > kMaxOrbitDim) return std::nullopt;
  std::vector<Element> out;
  for (const auto& p : sigma_orbit({q})) {
    const Element z = basis_.transpose() * p;
    if ((basis_ * z - p).norm() <= 1e-9 * (1.0 + p.norm())) out.push_back(z);
  }
  return out;
}

bool SubspacePseudoInstance::in_image(const SpecPoint& q, double tol) const {
  if (q.size() != dim_w() || !is_nonincreasing(q, tol)) return false;
  auto orbit = enumerate_orbit(q);
  return orbit && !orbit->empty();
}

std::optional<Element> SubspacePseudoInstance::sample_orbit(const SpecPoint& q, Rng& rng) const {
  auto orbit = enumerate_orbit(q);
  if (!orbit || orbit->empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, orbit->size() - 1);
  return (*orbit)[pick(rng)];
}

SubspacePseudoInstance::GridSearch SubspacePseudoInstance::grid_search(const Element& c,
                                                                       const SpecPoint& q) const {
  require_element(c, "c");
  require_point(q, "q");
  GridSearch gs;
  gs.target = lambda(c).dot(q);
  const double radius = q.norm();  // orbit points share the norm of q
  const double step = 2.0 * std::numbers::pi / grid_points_;
  // Every orbit point lies within half a step of a grid point, and lambda is 1-Lipschitz.
  const double accept = radius * step * 0.5 + 1e-12 * (1.0 + radius);
  gs.slack = c.norm() * radius * step * 0.5;
  gs.best_value = -std::numeric_limits<double>::infinity();
  if (radius == 0.0) {
    gs.any_candidate = true;
    gs.best_value = 0.0;
    gs.best = Element::Zero(2);
  } else {
    for (int k = 0; k < grid_points_; ++k) {
      const double theta = step * k;
      Element z(2);
      z << radius * std::cos(theta), radius * std::sin(theta);
      if ((sort_desc(basis_ * z) - q).norm() > accept) continue;
      const double value = c.dot(z);
      if (!gs.any_candidate || value > gs.best_value) {
        gs.any_candidate = true;
        gs.best_value = value;
        gs.best = z;
      }
    }
  }
  gs.certified_gap = gs.any_candidate ? gs.target - gs.best_value - gs.slack
                                      : std::numeric_limits<double>::infinity();
  return gs;
}

Witness SubspacePseudoInstance::a3_witness(const Element& c, const SpecPoint& q) const {
  const GridSearch gs = grid_search(c, q);
  if (!gs.any_candidate) return Witness::fail("no point of Z has the prescribed spectrum", gs.certified_gap);
  if (gs.certified_gap > 1e-12 * (1.0 + std::abs(gs.target))) {
    return Witness::fail("grid search: <c,x> falls short of <lambda(c),q> by at least " +
                             std::to_string(gs.certified_gap),
                         gs.certified_gap);
  }
  // Snap to the exact orbit point with the best value.
  auto orbit = enumerate_orbit(q);
  Element best = gs.best;
  if (orbit && !orbit->empty()) {
    best = *std::max_element(orbit->begin(), orbit->end(),
                             [&](const Element& a, const Element& b) { return c.dot(a) < c.dot(b); });
  }
  return Witness::ok(best, gs.target - c.dot(best));
}

std::shared_ptr<const SubspacePseudoInstance> z_counterexample_instance() {
  Matrix spanning(3, 2);
  spanning << 3.0, -1.0, 2.0, 0.0, 1.0, 0.0;
  return std::make_shared<const SubspacePseudoInstance>(spanning);
}

}  // namespace ftvn
