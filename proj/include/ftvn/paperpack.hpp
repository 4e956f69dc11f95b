#pragma once

#include <json.hpp>

#include <cstdint>

namespace ftvn {

/// Named regression checks against published example values. The result is a
/// pure function of the seed: {"checks": [{"name", "pass", ...}], "pass": bool}.
nlohmann::json run_paperpack(std::uint64_t seed);

}  // namespace ftvn
