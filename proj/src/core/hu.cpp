#include "mir3d/core/hu.hpp"

#include <algorithm>

namespace mir3d {

std::uint8_t normalize_hu(std::int32_t hu) {
  const std::int64_t shifted = std::clamp(hu, kHuMin, kHuMax) - kHuMin;  // [0, 2000]
  // round_half_up(shifted * 255 / 2000) in exact integer arithmetic
  const std::int64_t num = shifted * 255;
  const std::int64_t den = kHuMax - kHuMin;
  return static_cast<std::uint8_t>((2 * num + den) / (2 * den));
}

}  // namespace mir3d
