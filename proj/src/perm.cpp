#include "ftvn/perm.hpp"

#include <algorithm>
#include <map>

namespace ftvn {

bool contains(const PointSet& set, const Eigen::VectorXd& p, double tol) {
  return std::any_of(set.begin(), set.end(), [&](const Eigen::VectorXd& s) {
    return s.size() == p.size() && (s - p).cwiseAbs().maxCoeff() <= tol;
  });
}

PointSet dedupe(const PointSet& pts, double tol) {
  PointSet out;
  // Kept points indexed by first coordinate; only that window needs comparing.
  std::multimap<double, std::size_t> by_first;
  for (const auto& p : pts) {
    const double key = p.size() ? p[0] : 0.0;
    bool seen = false;
    for (auto it = by_first.lower_bound(key - tol); it != by_first.end() && it->first <= key + tol;
         ++it) {
      const auto& s = out[it->second];
      if (s.size() == p.size() && (s - p).cwiseAbs().maxCoeff() <= tol) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    by_first.emplace(key, out.size());
    out.push_back(p);
  }
  return out;
}

PointSet q_cap_qdown(const PointSet& q, double tol) {
  PointSet out;
  for (const auto& p : q)
    if (is_nonincreasing(p, tol)) out.push_back(p);
  return dedupe(out, tol);
}

PointSet q_down(const PointSet& q, double tol) {
  PointSet out;
  for (const auto& p : q) out.push_back(sort_desc(p));
  return dedupe(out, tol);
}

PointSet sigma_orbit(const PointSet& q, double tol) {
  PointSet out;
  for (const auto& p : q) {
    if (p.size() > kMaxOrbitDim) {
      throw ContractError("sigma_orbit: dimension " + std::to_string(p.size()) +
                          " exceeds the permutation cap of " + std::to_string(kMaxOrbitDim));
    }
    std::vector<double> v(p.data(), p.data() + p.size());
    std::sort(v.begin(), v.end());
    do {
      out.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), p.size()));
    } while (std::next_permutation(v.begin(), v.end()));
  }
  return dedupe(out, tol);
}

}  // namespace ftvn
