#include "ftvn/eja.hpp"

#include "ftvn/jacobi.hpp"

#include <algorithm>
#include <numeric>

namespace ftvn {

namespace {

std::vector<Index> descending_order(const Eigen::VectorXd& v) {
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return v[i] > v[j]; });
  return order;
}

nlohmann::json to_json_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// JordanAlgebra

Element JordanAlgebra::build_from_frame(const Eigen::VectorXd& q, const JordanFrame& frame) const {
  if (q.size() != rank() || static_cast<Index>(frame.idempotents.size()) != rank()) {
    throw DimensionMismatch(name() + ": build_from_frame needs " + std::to_string(rank()) +
                            " coefficients and idempotents");
  }
  Element x = Element::Zero(dim_v());
  for (Index i = 0; i < rank(); ++i) x += q[i] * frame.idempotents[static_cast<std::size_t>(i)];
  return x;
}

Witness JordanAlgebra::a3_witness(const Element& c, const SpecPoint& q) const {
  require_element(c, "c");
  require_point(q, "q");
  if (!is_nonincreasing(q, 0.0)) return Witness::fail("q is not sorted nonincreasing");
  return Witness::ok(build_from_frame(q, spectral_decompose(c).frame));
}

bool JordanAlgebra::in_image(const SpecPoint& q, double tol) const {
  return q.size() == rank() && q.allFinite() && is_nonincreasing(q, tol);
}

nlohmann::json JordanAlgebra::commutation_witness(const Element& x, const Element& y) const {
  // A frame of x + y diagonalizes both members of a strongly commuting pair;
  // under eigenvalue ties of x + y both are scalar on the tied block.
  const SpectralDecomposition sd = spectral_decompose(x + y);
  Eigen::VectorXd ax(rank());
  Eigen::VectorXd ay(rank());
  for (Index i = 0; i < rank(); ++i) {
    const Element& e = sd.frame.idempotents[static_cast<std::size_t>(i)];
    ax[i] = inner_v(x, e);
    ay[i] = inner_v(y, e);
  }
  const double residual =
      norm_v(x - build_from_frame(ax, sd.frame)) + norm_v(y - build_from_frame(ay, sd.frame));
  nlohmann::json frame = nlohmann::json::array();
  for (const Element& e : sd.frame.idempotents) frame.push_back(to_json_vector(e));
  return {{"kind", "shared_jordan_frame"},
          {"coefficients_x", to_json_vector(ax)},
          {"coefficients_y", to_json_vector(ay)},
          {"frame_residual", residual},
          {"frame", frame}};
}

// ---------------------------------------------------------------------------
// R^n

RnAlgebra::RnAlgebra(Index n) : n_(n) {
  if (n < 1) throw ContractError("rn: dimension must be positive");
}

std::string RnAlgebra::name() const { return "rn:" + std::to_string(n_); }

Element RnAlgebra::jordan_product(const Element& x, const Element& y) const {
  return x.cwiseProduct(y);
}

SpectralDecomposition RnAlgebra::spectral_decompose(const Element& x) const {
  require_element(x);
  SpectralDecomposition sd;
  sd.eigenvalues.resize(n_);
  const auto order = descending_order(x);
  for (Index k = 0; k < n_; ++k) {
    const Index i = order[static_cast<std::size_t>(k)];
    sd.eigenvalues[k] = x[i];
    sd.frame.idempotents.push_back(Element::Unit(n_, i));
  }
  return sd;
}

SpecPoint RnAlgebra::lambda(const Element& x) const {
  require_element(x);
  return sort_desc(x);
}

std::optional<Element> RnAlgebra::sample_orbit(const SpecPoint& q, Rng& rng) const {
  Element x = q;
  std::shuffle(x.data(), x.data() + x.size(), rng);
  return x;
}

std::optional<std::vector<Element>> RnAlgebra::enumerate_orbit(const SpecPoint& q) const {
  if (n_ > 8) return std::nullopt;
  std::vector<double> v(q.data(), q.data() + q.size());
  std::sort(v.begin(), v.end());
  std::vector<Element> out;
  do {
    out.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), n_));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Sym(n)

SymAlgebra::SymAlgebra(Index n) : n_(n) {
  if (n < 1) throw ContractError("sym: order must be positive");
}

std::string SymAlgebra::name() const { return "sym:" + std::to_string(n_); }

Matrix SymAlgebra::to_matrix(const Element& x) const {
  require_element(x);
  return unflatten(x, n_, n_);
}

Element SymAlgebra::from_matrix(const Matrix& m) const {
  if (m.rows() != n_ || m.cols() != n_) throw DimensionMismatch(name() + ": matrix has wrong shape");
  if ((m - m.transpose()).norm() > 1e-9 * (1.0 + m.norm())) throw ContractError(name() + ": matrix is not symmetric");
  return flatten(m);
}

Element SymAlgebra::jordan_product(const Element& x, const Element& y) const {
  const Matrix a = to_matrix(x);
  const Matrix b = to_matrix(y);
  return flatten(0.5 * (a * b + b * a));
}

Element SymAlgebra::unit() const { return flatten(Matrix::Identity(n_, n_)); }

SpectralDecomposition SymAlgebra::spectral_decompose(const Element& x) const {
  const Matrix a = to_matrix(x);
  const double asym = (a - a.transpose()).norm();
  if (asym > 1e-9 * (1.0 + a.norm())) throw ContractError(name() + ": element is not symmetric");
  const SymmetricEigen eig = jacobi_eigen(a);
  SpectralDecomposition sd;
  sd.eigenvalues = eig.values;
  for (Index i = 0; i < n_; ++i) {
    const Eigen::VectorXd v = eig.vectors.col(i);
    sd.frame.idempotents.push_back(flatten(v * v.transpose()));
  }
  return sd;
}

Element SymAlgebra::sample(Rng& rng) const {
  const Matrix g = unflatten(gaussian_vector(n_ * n_, rng), n_, n_);
  return flatten(0.5 * (g + g.transpose()));
}

std::optional<Element> SymAlgebra::sample_orbit(const SpecPoint& q, Rng& rng) const {
  const Matrix u = random_orthogonal(n_, rng);
  return flatten(u * q.asDiagonal() * u.transpose());
}

// ---------------------------------------------------------------------------
// Spin

SpinAlgebra::SpinAlgebra(Index n) : n_(n) {
  if (n < 1) throw ContractError("spin: vector part must have positive length");
}

std::string SpinAlgebra::name() const { return "spin:" + std::to_string(n_); }

Element SpinAlgebra::jordan_product(const Element& x, const Element& y) const {
  require_element(x, "x");
  require_element(y, "y");
  Element out(n_ + 1);
  out[0] = x.dot(y);
  out.tail(n_) = x[0] * y.tail(n_) + y[0] * x.tail(n_);
  return out;
}

Element SpinAlgebra::unit() const { return Element::Unit(n_ + 1, 0); }

SpectralDecomposition SpinAlgebra::spectral_decompose(const Element& x) const {
  require_element(x);
  const double x0 = x[0];
  const Eigen::VectorXd xbar = x.tail(n_);
  const double r = xbar.norm();
  // Degenerate xbar = 0: any unit axis gives a valid frame; take the first.
  const Eigen::VectorXd axis = r > 0.0 ? Eigen::VectorXd(xbar / r) : Eigen::VectorXd::Unit(n_, 0);
  Element e1(n_ + 1);
  Element e2(n_ + 1);
  e1 << 0.5, 0.5 * axis;
  e2 << 0.5, -0.5 * axis;
  SpectralDecomposition sd;
  sd.eigenvalues.resize(2);
  sd.eigenvalues << x0 + r, x0 - r;
  sd.frame.idempotents = {e1, e2};
  return sd;
}

std::optional<Element> SpinAlgebra::sample_orbit(const SpecPoint& q, Rng& rng) const {
  Eigen::VectorXd u = gaussian_vector(n_, rng);
  u /= u.norm();
  Element x(n_ + 1);
  x << 0.5 * (q[0] + q[1]), 0.5 * (q[0] - q[1]) * u;
  return x;
}

// ---------------------------------------------------------------------------
// Products

ProductAlgebra::ProductAlgebra(std::vector<AlgebraPtr> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw ContractError("product: needs at least one factor");
  for (const auto& p : parts_) {
    offsets_.push_back(dim_v_);
    dim_v_ += p->dim_v();
    rank_ += p->rank();
  }
}

std::string ProductAlgebra::name() const {
  std::string s = "product:";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += "+";
    s += parts_[i]->name();
  }
  return s;
}

Element ProductAlgebra::block(const Element& x, std::size_t part) const {
  return x.segment(offsets_[part], parts_[part]->dim_v());
}

double ProductAlgebra::inner_v(const Element& x, const Element& y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) s += parts_[i]->inner_v(block(x, i), block(y, i));
  return s;
}

Element ProductAlgebra::jordan_product(const Element& x, const Element& y) const {
  require_element(x, "x");
  require_element(y, "y");
  Element out(dim_v_);
  for (std::size_t i = 0; i < parts_.size(); ++i)
    out.segment(offsets_[i], parts_[i]->dim_v()) =
        parts_[i]->jordan_product(block(x, i), block(y, i));
  return out;
}

Element ProductAlgebra::unit() const {
  Element out(dim_v_);
  for (std::size_t i = 0; i < parts_.size(); ++i)
    out.segment(offsets_[i], parts_[i]->dim_v()) = parts_[i]->unit();
  return out;
}

SpectralDecomposition ProductAlgebra::spectral_decompose(const Element& x) const {
  require_element(x);
  Eigen::VectorXd values(rank_);
  std::vector<Element> embedded;
  Index k = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const SpectralDecomposition part = parts_[i]->spectral_decompose(block(x, i));
    for (Index j = 0; j < parts_[i]->rank(); ++j) {
      values[k++] = part.eigenvalues[j];
      Element e = Element::Zero(dim_v_);
      e.segment(offsets_[i], parts_[i]->dim_v()) = part.frame.idempotents[static_cast<std::size_t>(j)];
      embedded.push_back(std::move(e));
    }
  }
  // Stable merge keeps factor order among equal eigenvalues.
  const auto order = descending_order(values);
  SpectralDecomposition sd;
  sd.eigenvalues.resize(rank_);
  for (Index j = 0; j < rank_; ++j) {
    sd.eigenvalues[j] = values[order[static_cast<std::size_t>(j)]];
    sd.frame.idempotents.push_back(embedded[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])]);
  }
  return sd;
}

Element ProductAlgebra::sample(Rng& rng) const {
  Element out(dim_v_);
  for (std::size_t i = 0; i < parts_.size(); ++i)
    out.segment(offsets_[i], parts_[i]->dim_v()) = parts_[i]->sample(rng);
  return out;
}

std::optional<Element> ProductAlgebra::sample_orbit(const SpecPoint& q, Rng& rng) const {
  // Any split of the multiset q into blocks of the factor ranks lies in the orbit.
  std::vector<double> v(q.data(), q.data() + q.size());
  std::shuffle(v.begin(), v.end(), rng);
  Element out(dim_v_);
  Index k = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Index r = parts_[i]->rank();
    const SpecPoint part_q = sort_desc(Eigen::Map<const Eigen::VectorXd>(v.data() + k, r));
    auto xi = parts_[i]->sample_orbit(part_q, rng);
    if (!xi) return std::nullopt;
    out.segment(offsets_[i], parts_[i]->dim_v()) = *xi;
    k += r;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operations

CommutationCert strong_commute_check(const JordanAlgebra& alg, const Element& x, const Element& y,
                                     double tol) {
  return commute_check(alg, x, y, tol);
}

bool operator_commute_check(const JordanAlgebra& alg, const Element& x, const Element& y,
                            double tol) {
  alg.require_element(x, "x");
  alg.require_element(y, "y");
  const double scale = 1.0 + alg.norm_v(x) * alg.norm_v(y);
  for (Index i = 0; i < alg.dim_v(); ++i) {
    const Element z = Element::Unit(alg.dim_v(), i);
    const Element lhs = alg.jordan_product(x, alg.jordan_product(y, z));
    const Element rhs = alg.jordan_product(y, alg.jordan_product(x, z));
    if ((lhs - rhs).norm() > tol * scale) return false;
  }
  return true;
}

MajorizationReport majorization_check(const JordanAlgebra& alg, const Element& x,
                                      const Element& y, double tol) {
  alg.require_element(x, "x");
  alg.require_element(y, "y");
  const SpecPoint sum_of_lambdas = alg.lambda(x) + alg.lambda(y);
  const SpecPoint lambda_of_sum = alg.lambda(x + y);
  MajorizationReport rep;
  double acc = 0.0;
  for (Index k = 0; k < alg.rank(); ++k) {
    acc += sum_of_lambdas[k] - lambda_of_sum[k];
    if (k + 1 < alg.rank()) rep.prefix_gaps.push_back(acc);
  }
  rep.trace_gap = acc;
  const double scale = 1.0 + sum_of_lambdas.cwiseAbs().sum();
  rep.pass = std::abs(rep.trace_gap) <= tol * scale &&
             std::all_of(rep.prefix_gaps.begin(), rep.prefix_gaps.end(),
                         [&](double g) { return g >= -tol * scale; });
  return rep;
}

IdempotentOrbitMax idempotent_orbit_max(const JordanAlgebra& alg, const Element& c, Index k) {
  if (k < 1 || k > alg.rank()) {
    throw ContractError("idempotent_orbit_max: k must lie in [1, " + std::to_string(alg.rank()) + "]");
  }
  const SpectralDecomposition sd = alg.spectral_decompose(c);
  IdempotentOrbitMax out;
  out.idempotent = Element::Zero(alg.dim_v());
  for (Index i = 0; i < k; ++i) {
    out.value += sd.eigenvalues[i];
    out.idempotent += sd.frame.idempotents[static_cast<std::size_t>(i)];
  }
  return out;
}

double jordan_identity_residual(const JordanAlgebra& alg, const Element& x, const Element& y) {
  const Element x2 = alg.jordan_product(x, x);
  const Element lhs = alg.jordan_product(x, alg.jordan_product(x2, y));
  const Element rhs = alg.jordan_product(x2, alg.jordan_product(x, y));
  return alg.norm_v(lhs - rhs);
}

double frame_residual(const JordanAlgebra& alg, const JordanFrame& frame) {
  double worst = 0.0;
  Element sum = Element::Zero(alg.dim_v());
  for (std::size_t i = 0; i < frame.idempotents.size(); ++i) {
    const Element& ei = frame.idempotents[i];
    sum += ei;
    for (std::size_t j = 0; j < frame.idempotents.size(); ++j) {
      const Element& ej = frame.idempotents[j];
      const Element prod = alg.jordan_product(ei, ej);
      worst = std::max(worst, i == j ? alg.norm_v(prod - ei) : alg.norm_v(prod));
      worst = std::max(worst, std::abs(alg.inner_v(ei, ej) - (i == j ? 1.0 : 0.0)));
    }
  }
  return std::max(worst, alg.norm_v(sum - alg.unit()));
}

}  // namespace ftvn
