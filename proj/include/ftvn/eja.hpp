#pragma once

#include "ftvn/core.hpp"

#include <memory>
#include <vector>

namespace ftvn {

/// Ordered complete system of orthogonal primitive idempotents.
struct JordanFrame {
  std::vector<Element> idempotents;
};

struct SpectralDecomposition {
  SpecPoint eigenvalues;  // nonincreasing
  JordanFrame frame;      // frame.idempotents[i] carries eigenvalues[i]
};

/// Euclidean Jordan algebra with the trace inner product <x,y> = tr(x o y).
/// The eigenvalue map makes it an FTvN system with W = R^rank and an exact
/// (A3) witness q * E built on the spectral frame E of c.
class JordanAlgebra : public FtvnSystem {
 public:
  virtual std::string kind() const = 0;
  virtual Index rank() const = 0;
  virtual Element jordan_product(const Element& x, const Element& y) const = 0;
  virtual Element unit() const = 0;
  virtual SpectralDecomposition spectral_decompose(const Element& x) const = 0;

  Index dim_w() const override { return rank(); }
  SpecPoint lambda(const Element& x) const override { return spectral_decompose(x).eigenvalues; }
  double trace(const Element& x) const { return inner_v(x, unit()); }

  /// sum_i q_i e_i.
  Element build_from_frame(const Eigen::VectorXd& q, const JordanFrame& frame) const;

  Witness a3_witness(const Element& c, const SpecPoint& q) const override;
  bool witness_is_exact() const override { return true; }
  bool in_image(const SpecPoint& q, double tol) const override;
  std::vector<Halfspace> image_cone() const override { return nonincreasing_cone(rank()); }
  nlohmann::json commutation_witness(const Element& x, const Element& y) const override;
};

using AlgebraPtr = std::shared_ptr<const JordanAlgebra>;

/// R^n with the componentwise product; lambda sorts coordinates.
class RnAlgebra final : public JordanAlgebra {
 public:
  explicit RnAlgebra(Index n);
  std::string name() const override;
  std::string kind() const override { return "rn"; }
  Index dim_v() const override { return n_; }
  Index rank() const override { return n_; }
  Element jordan_product(const Element& x, const Element& y) const override;
  Element unit() const override { return Element::Ones(n_); }
  SpectralDecomposition spectral_decompose(const Element& x) const override;
  SpecPoint lambda(const Element& x) const override;
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;
  std::optional<std::vector<Element>> enumerate_orbit(const SpecPoint& q) const override;

 private:
  Index n_;
};

/// Real symmetric n x n matrices, stored as the row-major flattening.
/// X o Y = (XY + YX)/2 and <X,Y> = tr(XY).
class SymAlgebra final : public JordanAlgebra {
 public:
  explicit SymAlgebra(Index n);
  std::string name() const override;
  std::string kind() const override { return "sym"; }
  Index dim_v() const override { return n_ * n_; }
  Index rank() const override { return n_; }
  Index order() const { return n_; }
  Element jordan_product(const Element& x, const Element& y) const override;
  Element unit() const override;
  SpectralDecomposition spectral_decompose(const Element& x) const override;
  Element sample(Rng& rng) const override;
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;

  Matrix to_matrix(const Element& x) const;
  Element from_matrix(const Matrix& m) const;

 private:
  Index n_;
};

/// Jordan spin algebra on R x R^n: x = (x0, xbar),
/// x o y = (x0 y0 + <xbar,ybar>, x0 ybar + y0 xbar), rank 2,
/// trace inner product 2 (x0 y0 + <xbar, ybar>).
class SpinAlgebra final : public JordanAlgebra {
 public:
  /// `n` is the length of xbar; the ambient dimension is n + 1.
  explicit SpinAlgebra(Index n);
  std::string name() const override;
  std::string kind() const override { return "spin"; }
  Index dim_v() const override { return n_ + 1; }
  Index rank() const override { return 2; }
  double inner_v(const Element& x, const Element& y) const override { return 2.0 * x.dot(y); }
  Element jordan_product(const Element& x, const Element& y) const override;
  Element unit() const override;
  SpectralDecomposition spectral_decompose(const Element& x) const override;
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;

 private:
  Index n_;
};

/// Finite direct product; coordinates are concatenated and lambda merges the
/// component spectra in nonincreasing order.
class ProductAlgebra final : public JordanAlgebra {
 public:
  explicit ProductAlgebra(std::vector<AlgebraPtr> parts);
  std::string name() const override;
  std::string kind() const override { return "product"; }
  Index dim_v() const override { return dim_v_; }
  Index rank() const override { return rank_; }
  double inner_v(const Element& x, const Element& y) const override;
  Element jordan_product(const Element& x, const Element& y) const override;
  Element unit() const override;
  SpectralDecomposition spectral_decompose(const Element& x) const override;
  Element sample(Rng& rng) const override;
  std::optional<Element> sample_orbit(const SpecPoint& q, Rng& rng) const override;

  const std::vector<AlgebraPtr>& parts() const { return parts_; }
  Element block(const Element& x, std::size_t part) const;
  Index offset(std::size_t part) const { return offsets_[part]; }

 private:
  std::vector<AlgebraPtr> parts_;
  std::vector<Index> offsets_;
  Index dim_v_ = 0;
  Index rank_ = 0;
};

/// Strong operator commutativity: a shared ordered Jordan frame. Delegates to
/// commute_check; the cert witness carries the frame when the verdict holds.
CommutationCert strong_commute_check(const JordanAlgebra& alg, const Element& x,
                                     const Element& y, double tol = kDefaultTol);

/// L_x L_y = L_y L_x, checked on every coordinate basis element.
bool operator_commute_check(const JordanAlgebra& alg, const Element& x, const Element& y,
                            double tol = kDefaultTol);

struct MajorizationReport {
  std::vector<double> prefix_gaps;  // k = 1..n-1: sum_{i<=k} (lambda(x)+lambda(y))_i - lambda(x+y)_i
  double trace_gap = 0.0;           // full sums
  bool pass = false;
};

/// lambda(x+y) is majorized by lambda(x)+lambda(y).
MajorizationReport majorization_check(const JordanAlgebra& alg, const Element& x,
                                      const Element& y, double tol = kDefaultTol);

struct IdempotentOrbitMax {
  double value = 0.0;
  Element idempotent;
};

/// max <c, e> over idempotents e of rank k, which is lambda_1(c)+...+lambda_k(c),
/// with the attaining idempotent e_1+...+e_k from c's frame.
IdempotentOrbitMax idempotent_orbit_max(const JordanAlgebra& alg, const Element& c, Index k);

/// Checks of the Jordan algebra structure used by tests and the CLI.
double jordan_identity_residual(const JordanAlgebra& alg, const Element& x, const Element& y);
double frame_residual(const JordanAlgebra& alg, const JordanFrame& frame);

}  // namespace ftvn
