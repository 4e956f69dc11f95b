#pragma once

#include "ftvn/core.hpp"

namespace ftvn {

/// Thin SVD X = U diag(sigma) V^T with U (m x n) and V (n x n) orthonormal
/// columns, sigma nonincreasing and nonnegative.
struct Svd {
  Matrix u;
  Eigen::VectorXd sigma;
  Matrix v;
};

/// One-sided (Hestenes) Jacobi SVD for m >= n. Columns of U belonging to zero
/// singular values are completed to an orthonormal set. The sign of each V
/// column is fixed so its largest-magnitude entry is positive.
Svd jacobi_svd(const Matrix& x);

/// Real m x n matrices (m >= n) with <X,Y> = tr(X Y^T) and the singular value
/// map gamma: X -> sigma(X) in R^n. An FTvN system arising from the normal
/// decomposition system (O(m) x O(n), X -> U X V^T).
class RectMatrixSpace final : public FtvnSystem {
 public:
  RectMatrixSpace(Index m, Index n);
  std::string name() const override;
  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index dim_v() const override { return m_ * n_; }
  Index dim_w() const override { return n_; }
  SpecPoint lambda(const Element& x) const override;
  Witness a3_witness(const Element& c, const SpecPoint& q) const override;
  bool witness_is_exact() const override { return true; }
  bool in_image(const SpecPoint& q, double tol) const override;
  std::vector<Halfspace> image_cone() const override;
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;
  nlohmann::json commutation_witness(const Element& x, const Element& y) const override;

  Matrix to_matrix(const Element& x) const;
  Element from_matrix(const Matrix& m) const;
  /// The m x n matrix carrying sigma(X) on its leading diagonal.
  Matrix gamma_matrix(const Element& x) const;

 private:
  Index m_;
  Index n_;
};

SpecPoint singular_map(const RectMatrixSpace& space, const Element& x);
Witness nds_a3_witness(const RectMatrixSpace& space, const Element& c, const SpecPoint& q);
CommutationCert nds_commute_check(const RectMatrixSpace& space, const Element& x,
                                  const Element& y, double tol = kDefaultTol);

/// (V, V, S) for a linear isometry S of R^2, here rotation by 90 degrees.
/// Every pair commutes and lambda is not idempotent.
class RotationSystem final : public FtvnSystem {
 public:
  RotationSystem();
  std::string name() const override { return "rot90"; }
  Index dim_v() const override { return 2; }
  Index dim_w() const override { return 2; }
  SpecPoint lambda(const Element& x) const override { return rotation_ * x; }
  Witness a3_witness(const Element& c, const SpecPoint& q) const override;
  bool witness_is_exact() const override { return true; }
  bool in_image(const SpecPoint& q, double tol) const override;
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;
  std::optional<std::vector<Element>> enumerate_orbit(const SpecPoint& q) const override;
  const Matrix& rotation() const { return rotation_; }

 private:
  Matrix rotation_;
};

std::shared_ptr<const RotationSystem> rotation_instance();

/// lambda = sort-descending restricted to a subspace Z of R^n. Elements are
/// coordinates in an orthonormal basis of Z. (A1) and (A2) are inherited from
/// R^n; (A3) is searched for on a dense angular grid (Z must be a plane) and
/// may fail.
class SubspacePseudoInstance final : public FtvnSystem {
 public:
  /// `spanning` holds the columns spanning Z in R^n; it must have rank 2.
  explicit SubspacePseudoInstance(const Matrix& spanning, int grid_points = 100000);
  std::string name() const override { return "z-counterexample"; }
  Index dim_v() const override { return basis_.cols(); }
  Index dim_w() const override { return basis_.rows(); }
  SpecPoint lambda(const Element& z) const override;
  Witness a3_witness(const Element& c, const SpecPoint& q) const override;
  bool witness_is_exact() const override { return false; }
  bool in_image(const SpecPoint& q, double tol) const override;
  std::vector<Halfspace> image_cone() const override { return nonincreasing_cone(dim_w()); }
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;
  std::optional<std::vector<Element>> enumerate_orbit(const SpecPoint& q) const override;

  /// Orthonormal basis of Z as columns in R^n.
  const Matrix& basis() const { return basis_; }
  Eigen::VectorXd embed(const Element& z) const { return basis_ * z; }
  int grid_points() const { return grid_points_; }

  /// Result of the angular search for a single (c, q).
  struct GridSearch {
    double target = 0.0;        // <lambda(c), q>
    double best_value = 0.0;    // max <c,x> over grid points with lambda(x) ~ q
    double slack = 0.0;         // Lipschitz slack ||c|| ||q|| pi / N
    double certified_gap = 0.0; // target - best_value - slack
    bool any_candidate = false;
    Element best;
  };
  GridSearch grid_search(const Element& c, const SpecPoint& q) const;

 private:
  Matrix basis_;
  int grid_points_;
};

/// Z = span{(3,2,1), (-1,0,0)} in R^3.
std::shared_ptr<const SubspacePseudoInstance> z_counterexample_instance();

}  // namespace ftvn
