#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace ftvn {

/// Dense real coordinates of an ambient element (flattened row-major for matrices).
using Element = Eigen::VectorXd;
/// A point of the spectral space W, usually sorted nonincreasing.
using SpecPoint = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

using Rng = std::mt19937_64;

inline constexpr double kDefaultTol = 1e-8;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition or contract of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Relative tolerance check |a - b| <= tol * (1 + scale).
inline bool near(double a, double b, double tol, double scale = 0.0) {
  return std::abs(a - b) <= tol * (1.0 + scale);
}

/// Deterministic child seed for stream `index` of a run seeded with `seed` (splitmix64).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Eigen::VectorXd gaussian_vector(Index n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Nonincreasing rearrangement.
Eigen::VectorXd sort_desc(const Eigen::VectorXd& q);
/// Nondecreasing rearrangement.
Eigen::VectorXd sort_asc(const Eigen::VectorXd& q);
bool is_nonincreasing(const Eigen::VectorXd& q, double tol = 0.0);

/// Haar-distributed random orthogonal matrix.
Matrix random_orthogonal(Index n, Rng& rng);

}  // namespace ftvn
