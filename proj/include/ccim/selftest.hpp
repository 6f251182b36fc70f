#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ccim {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle-equivalence checks over the full pipeline; `scale` multiplies the
/// random-case counts (1 = a few seconds).
std::vector<SelfTestCheck> run_selftest(std::uint64_t seed, int scale = 1);

}  // namespace ccim
