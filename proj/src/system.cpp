#include "ftvn/system.hpp"

#include <sstream>

namespace ftvn {

std::optional<Element> FtvnSystem::sample_orbit(const SpecPoint&, Rng&) const {
  return std::nullopt;
}

std::optional<std::vector<Element>> FtvnSystem::enumerate_orbit(const SpecPoint&) const {
  return std::nullopt;
}

nlohmann::json FtvnSystem::commutation_witness(const Element&, const Element&) const {
  return nullptr;
}

void FtvnSystem::require_element(const Element& x, const char* what) const {
  if (x.size() != dim_v()) {
    std::ostringstream os;
    os << name() << ": " << what << " has " << x.size() << " coordinates, expected " << dim_v();
    throw DimensionMismatch(os.str());
  }
  if (!x.allFinite()) throw ContractError(name() + ": " + what + " has non-finite entries");
}

void FtvnSystem::require_point(const SpecPoint& q, const char* what) const {
  if (q.size() != dim_w()) {
    std::ostringstream os;
    os << name() << ": " << what << " has " << q.size() << " coordinates, expected " << dim_w();
    throw DimensionMismatch(os.str());
  }
  if (!q.allFinite()) throw ContractError(name() + ": " + what + " has non-finite entries");
}

std::vector<Halfspace> nonincreasing_cone(Index n) {
  std::vector<Halfspace> out;
  for (Index i = 0; i + 1 < n; ++i) {
    SpecPoint a = SpecPoint::Zero(n);
    a[i] = -1.0;
    a[i + 1] = 1.0;
    out.push_back({a, 0.0});
  }
  return out;
}

}  // namespace ftvn
