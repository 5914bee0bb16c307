#pragma once

#include <span>

#include "mir3d/core/types.hpp"
#include "mir3d/lesion/lesion_record.hpp"

namespace mir3d {

inline constexpr double kGroup1MaxCm = 2.0;
inline constexpr double kGroup3MinCm = 5.0;

/// G0 without lesions; G1 for a single lesion under 2 cm; G3 when the
/// largest lesion exceeds 5 cm; G2 otherwise (including exactly 2 or 5 cm).
LesionGroup classify_lesion_group(std::span<const double> lengths_cm);
LesionGroup classify_lesion_group(std::span<const LesionRecord> lesions);

}  // namespace mir3d
