#include "ftvn/hyperbolic.hpp"

#include "ftvn/jacobi.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

namespace ftvn {

namespace {

// Complex roots whose imaginary part stays below this (in units of the node
// scale) are treated as a perturbed multiple real root and averaged with
// their neighbours.
constexpr double kClusterImag = 1e-3;
constexpr double kImagResidue = 1e-7;

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LmResult {
  Eigen::VectorXd x;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

std::optional<Eigen::VectorXd> try_eval(const ResidualFn& f, const Eigen::VectorXd& x) {
  try {
    Eigen::VectorXd r = f(x);
    if (!r.allFinite()) return std::nullopt;
    return r;
  } catch (const NonHyperbolic&) {
    return std::nullopt;
  }
}

// Levenberg-Marquardt on a zero-residual problem with a central-difference Jacobian.
LmResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd x, int max_iter, double stop) {
  LmResult out;
  auto r = try_eval(f, x);
  if (!r) return out;
  double cost = r->norm();
  double mu = -1.0;
  int it = 0;
  for (; it < max_iter && cost > stop; ++it) {
    const double h = 1e-7 * (1.0 + x.norm());
    Matrix jac(r->size(), x.size());
    bool ok = true;
    for (Index j = 0; j < x.size() && ok; ++j) {
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto rp = try_eval(f, xp);
      auto rm = try_eval(f, xm);
      if (!rp || !rm) {
        ok = false;
        break;
      }
      jac.col(j) = (*rp - *rm) / (2.0 * h);
    }
    if (!ok) break;
    const Matrix jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * *r;
    if (mu < 0.0) mu = 1e-3 * std::max(1e-12, jtj.diagonal().maxCoeff());
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      Matrix lhs = jtj;
      lhs.diagonal().array() += mu;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd cand = x + step;
      auto rc = try_eval(f, cand);
      if (rc && rc->norm() < cost) {
        x = cand;
        r = rc;
        cost = rc->norm();
        mu = std::max(mu / 3.0, 1e-15);
        improved = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!improved) break;
  }
  out.x = x;
  out.residual = cost;
  out.iterations = it;
  return out;
}

std::vector<double> real_roots_with_clusters(const std::vector<std::complex<double>>& roots) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double im = std::abs(roots[i].imag());
    if (im <= 1e-14 || im > kClusterImag) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && std::abs(roots[i] - roots[j]) <= 3.0 * im) parent[find(i)] = find(j);
    }
  }
  std::vector<std::complex<double>> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += roots[i];
    ++count[find(i)];
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> mean = sum[find(i)] / static_cast<double>(count[find(i)]);
    if (std::abs(mean.imag()) > kImagResidue) {
      throw NonHyperbolic("complex root with imaginary part " + std::to_string(mean.imag()));
    }
    out.push_back(mean.real());
  }
  return out;
}

}  // namespace

HyperbolicPolynomial::HyperbolicPolynomial(std::string name, Index dim, int degree,
                                           Evaluator eval, Element direction)
    : name_(std::move(name)), dim_(dim), degree_(degree), eval_(std::move(eval)),
      direction_(std::move(direction)) {
  if (dim < 1 || degree < 1) throw ContractError("hyperbolic polynomial: dim and degree must be positive");
  if (direction_.size() != dim) throw DimensionMismatch("hyperbolic polynomial: e has wrong length");
}

HyperbolicPolynomial coordinate_product(Index n, std::optional<Element> e) {
  Element dir = e ? *e : Element::Ones(n);
  return HyperbolicPolynomial("coordinate_product:" + std::to_string(n), n, static_cast<int>(n),
                              [](const Element& x) { return x.prod(); }, std::move(dir));
}

Element svec(const Matrix& m) {
  const Index n = m.rows();
  Element v(n * (n + 1) / 2);
  Index k = 0;
  for (Index i = 0; i < n; ++i) v[k++] = m(i, i);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) v[k++] = std::numbers::sqrt2 * m(i, j);
  return v;
}

Matrix smat(const Element& v, Index n) {
  if (v.size() != n * (n + 1) / 2) throw DimensionMismatch("smat: wrong svec length");
  Matrix m(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) m(i, i) = v[k++];
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = v[k++] / std::numbers::sqrt2;
  return m;
}

HyperbolicPolynomial det_sym(Index n) {
  return HyperbolicPolynomial(
      "det_sym:" + std::to_string(n), n * (n + 1) / 2, static_cast<int>(n),
      [n](const Element& x) { return smat(x, n).partialPivLu().determinant(); },
      svec(Matrix::Identity(n, n)));
}

HyperbolicPolynomial custom_monomials(Index dim, std::vector<Monomial> monomials, Element e) {
  if (monomials.empty()) throw ContractError("custom_monomials: no monomials");
  int degree = -1;
  for (const auto& m : monomials) {
    if (static_cast<Index>(m.powers.size()) != dim) {
      throw DimensionMismatch("custom_monomials: powers length differs from dim");
    }
    const int d = std::accumulate(m.powers.begin(), m.powers.end(), 0);
    if (std::any_of(m.powers.begin(), m.powers.end(), [](int p) { return p < 0; })) {
      throw ContractError("custom_monomials: negative power");
    }
    if (degree >= 0 && d != degree) throw ContractError("custom_monomials: polynomial is not homogeneous");
    degree = d;
  }
  if (degree < 1) throw ContractError("custom_monomials: degree must be positive");
  auto eval = [monomials = std::move(monomials)](const Element& x) {
    double s = 0.0;
    for (const auto& m : monomials) {
      double t = m.coef;
      for (std::size_t j = 0; j < m.powers.size(); ++j) t *= std::pow(x[static_cast<Index>(j)], m.powers[j]);
      s += t;
    }
    return s;
  };
  return HyperbolicPolynomial("custom_monomials", dim, degree, std::move(eval), std::move(e));
}

SpecPoint hyp_lambda(const HyperbolicPolynomial& hp, const Element& x) {
  if (x.size() != hp.dim()) throw DimensionMismatch("hyp_lambda: element has wrong length");
  const int n = hp.degree();
  const double lead = hp(hp.direction());
  if (!(std::abs(lead) >= 1e-12)) {
    throw DegenerateLeadingCoefficient("hyp_lambda: |p(e)| below 1e-12");
  }
  if (x.isZero(0.0)) return SpecPoint::Zero(n);

  // f(tau) = p(s tau e - x) on Chebyshev nodes tau_k in [-1, 1]; the leading
  // coefficient is known to be p(e) s^n.
  const double s = 1.0 + x.norm();
  const double lead_scaled = lead * std::pow(s, n);
  Matrix vander(n + 1, n);
  Eigen::VectorXd rhs(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double tau = std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * (n + 1)));
    double pw = 1.0;
    for (int j = 0; j < n; ++j) {
      vander(k, j) = pw;
      pw *= tau;
    }
    rhs[k] = hp(s * tau * hp.direction() - x) - lead_scaled * pw;
  }
  const Eigen::VectorXd coef = vander.colPivHouseholderQr().solve(rhs) / lead_scaled;

  std::vector<std::complex<double>> roots;
  if (n == 1) {
    roots.emplace_back(-coef[0], 0.0);
  } else {
    Matrix companion = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int j = 0; j < n; ++j) companion(j, n - 1) = -coef[j];
    Eigen::EigenSolver<Matrix> es(companion, false);
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  }
  std::vector<double> real = real_roots_with_clusters(roots);
  SpecPoint out(n);
  for (int i = 0; i < n; ++i) out[i] = s * real[static_cast<std::size_t>(i)];
  return sort_desc(out);
}

CompletenessReport completeness_check(const HyperbolicPolynomial& hp, std::uint64_t seed,
                                      int n_samples) {
  CompletenessReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  const ResidualFn on_sphere = [&](const Eigen::VectorXd& v) {
    const double nv = v.norm();
    if (nv == 0.0) return Eigen::VectorXd(Eigen::VectorXd::Constant(hp.degree(), 1.0));
    return Eigen::VectorXd(hyp_lambda(hp, v / nv));
  };
  for (int r = 0; r < n_samples; ++r) {
    ++rep.restarts;
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd v0 = gaussian_vector(hp.dim(), rng);
    v0 /= v0.norm();
    const LmResult res = levenberg_marquardt(on_sphere, v0, 30, 1e-13);
    if (res.x.size() == 0) continue;
    const Eigen::VectorXd x = res.x / res.x.norm();
    const double ratio = res.residual;
    if (ratio < rep.min_ratio) rep.min_ratio = ratio;
    if (ratio <= 1e-9) {
      rep.null_vector = x;
      break;
    }
  }
  return rep;
}

HyperbolicSystem::HyperbolicSystem(HyperbolicPolynomial hp, std::uint64_t seed) : hp_(std::move(hp)) {
  const Index d = hp_.dim();
  auto sq = [&](const Element& x) { return hyp_lambda(hp_, x).squaredNorm(); };
  gram_.resize(d, d);
  for (Index i = 0; i < d; ++i) {
    const Element ei = Element::Unit(d, i);
    gram_(i, i) = sq(ei);
    for (Index j = 0; j < i; ++j) {
      const Element ej = Element::Unit(d, j);
      gram_(i, j) = gram_(j, i) = 0.25 * (sq(ei + ej) - sq(ei - ej));
    }
  }
  Rng rng(seed);
  for (int k = 0; k < 16; ++k) {
    const Element x = gaussian_vector(d, rng);
    const Element y = gaussian_vector(d, rng);
    const double nx = sq(x);
    const double ny = sq(y);
    const double scale = 1.0 + nx + ny;
    parallelogram_residual_ = std::max(
        {parallelogram_residual_, std::abs(sq(x + y) + sq(x - y) - 2.0 * nx - 2.0 * ny) / scale,
         std::abs(nx - x.dot(gram_ * x)) / scale});
  }
  if (parallelogram_residual_ > 1e-6) {
    throw ContractError(name() + ": ||lambda(.)|| is not a Euclidean norm (parallelogram residual " +
                        std::to_string(parallelogram_residual_) + ")");
  }
  if (jacobi_eigen(gram_).values.minCoeff() <= 1e-10 * (1.0 + gram_.norm())) {
    throw ContractError(name() + ": polynomial is not complete (degenerate Gram matrix)");
  }
}

bool HyperbolicSystem::in_image(const SpecPoint& q, double tol) const {
  return q.size() == dim_w() && q.allFinite() && is_nonincreasing(q, tol);
}

HyperbolicSystem::OrbitSearch HyperbolicSystem::aligned_orbit_point(const Element& y,
                                                                   const SpecPoint& target, Rng& rng,
                                                                   int starts) const {
  const SpecPoint ly = lambda(y);
  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    const SpecPoint lx = lambda(x);
    Eigen::VectorXd r(2 * lx.size());
    r << lx - target, lambda(x + y) - lx - ly;
    return r;
  };
  const double radius = target.norm();
  const double stop = 1e-13 * (1.0 + radius + ly.norm());
  OrbitSearch best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Element x0;
    if (s == 0) {
      x0 = y;
    } else {
      x0 = gaussian_vector(dim_v(), rng);
    }
    const double n0 = norm_v(x0);
    x0 = n0 > 0.0 ? Element(x0 * (radius / n0)) : Element(Element::Zero(dim_v()));
    const LmResult res = levenberg_marquardt(residual, x0, 100, stop);
    if (res.x.size() && res.residual < best.residual) {
      best.x = res.x;
      best.residual = res.residual;
    }
    if (best.residual <= stop) break;
  }
  return best;
}

Witness HyperbolicSystem::a3_witness(const Element& c, const SpecPoint& q) const {
  require_element(c, "c");
  require_point(q, "q");
  Rng rng(0x5eedULL);
  const OrbitSearch found = aligned_orbit_point(c, q, rng);
  if (found.x.size() == 0) return Witness::fail("orbit search failed to evaluate", q.norm());
  const double gap = lambda(c).dot(q) - inner_v(c, found.x);
  if (found.residual > 1e-9 * (1.0 + q.norm() + norm_v(c))) {
    return Witness::fail("orbit search residual " + std::to_string(found.residual), gap);
  }
  return Witness::ok(found.x, gap);
}

double isometric_gap(const HyperbolicSystem& sys, const Element& y, const Element& z, Rng& rng) {
  sys.require_element(y, "y");
  sys.require_element(z, "z");
  if (y.isZero(0.0)) return 0.0;
  return sys.aligned_orbit_point(y, sys.lambda(z), rng).residual;
}

IsometricReport isometric_falsify(const HyperbolicSystem& sys, std::uint64_t seed, int n_samples,
                                  double tol) {
  IsometricReport rep;
  rep.parallelogram_residual = sys.parallelogram_residual();
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
    const Element y = sys.sample(rng);
    const Element z = sys.sample(rng);
    const double gap = isometric_gap(sys, y, z, rng);
    rep.gaps.push_back(gap);
    rep.max_gap = std::max(rep.max_gap, gap);
    if (gap > tol) ++rep.falsification_candidates;
  }
  return rep;
}

}  // namespace ftvn
