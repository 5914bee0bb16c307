#pragma once

#include <map>
#include <string>
#include <vector>

#include "mir3d/core/types.hpp"
#include "mir3d/lesion/components.hpp"

namespace mir3d {

inline constexpr const char* kUnassignedOrgan = "unassigned";

struct NamedMask {
  std::string organ;
  LabelVolume mask;  ///< nonzero = inside the organ
};

struct OrganAssignment {
  std::string organ;
  double overlap_fraction = 0.0;
  bool operator==(const OrganAssignment&) const = default;
};

/// Organ with the largest |lesion ∩ organ| / |lesion|; ties go to the
/// lexicographically smaller name. ("unassigned", 0) when nothing overlaps.
/// Throws ValidationError when a mask's dims differ from `lesion_dims`.
OrganAssignment map_lesion_to_organ(const LesionComponent& component, const Dims& lesion_dims,
                                    const std::vector<NamedMask>& organ_masks);

/// Splits a labelled organ map into one binary mask per organ. Without a
/// label table every nonzero voxel belongs to `default_organ`.
std::vector<NamedMask> split_organ_map(const LabelVolume& organ_map,
                                       const std::map<int, std::string>& labels,
                                       const std::string& default_organ);

}  // namespace mir3d
