#pragma once

#include <cstdint>

namespace mir3d {

inline constexpr int kHuMin = -1000;
inline constexpr int kHuMax = 1000;

/// Maps a CT value from the [-1000, 1000] HU window onto 8-bit intensity,
/// clamping outside the window and rounding half up.
std::uint8_t normalize_hu(std::int32_t hu);

}  // namespace mir3d
