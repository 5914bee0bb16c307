#pragma once

#include <cstdint>
#include <string>

#include "mir3d/core/types.hpp"
#include "mir3d/lesion/lesion_record.hpp"

namespace mir3d {

inline constexpr double kMaxCircularity = 1.05;

/// Length of the iso-0.5 marching-squares contour of a binary image
/// (`pixels` row-major, `width` x `height`, nonzero = inside), in physical
/// units. The image is treated as surrounded by background.
double marching_squares_perimeter(std::span<const std::uint8_t> pixels, std::int64_t width,
                                  std::int64_t height, double sx, double sy);

/// Per-slice lesion statistics on axial slice `z`: 8-connected 2D
/// components, their total area, and circularity 4*pi*A / P^2 per
/// component (P from the marching-squares contour, capped at 1.05).
/// Components are listed in scan order of their first pixel.
SliceMetrics slice_metrics(const LabelVolume& mask, std::int64_t z, const std::string& volume_id = {});

}  // namespace mir3d
