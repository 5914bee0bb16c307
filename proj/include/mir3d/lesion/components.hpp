#pragma once

#include <cstdint>
#include <vector>

#include "mir3d/core/types.hpp"

namespace mir3d {

enum class Connectivity { face6 = 6, full26 = 26 };

struct Voxel {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;
  bool operator==(const Voxel&) const = default;
  auto operator<=>(const Voxel&) const = default;
};

struct LesionComponent {
  int lesion_id = 0;
  std::vector<Voxel> voxels;  ///< scan order (x fastest)
};

/// Labels the foreground of a binary mask. Components are ordered by
/// (voxel count desc, first voxel in z/y/x scan order) and numbered 1..n.
/// Throws ValidationError if the mask holds labels other than 0 and 1.
std::vector<LesionComponent> connected_components(const LabelVolume& mask,
                                                  Connectivity connectivity = Connectivity::full26);

}  // namespace mir3d
