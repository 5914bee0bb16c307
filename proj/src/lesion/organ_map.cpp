#include "mir3d/lesion/organ_map.hpp"

#include "mir3d/core/error.hpp"

namespace mir3d {

OrganAssignment map_lesion_to_organ(const LesionComponent& component, const Dims& lesion_dims,
                                    const std::vector<NamedMask>& organ_masks) {
  for (const auto& om : organ_masks)
    if (om.mask.dims() != lesion_dims)
      throw ValidationError("organ mask '" + om.organ + "' dims differ from lesion mask dims");

  OrganAssignment best{kUnassignedOrgan, 0.0};
  if (component.voxels.empty()) return best;
  std::size_t best_hits = 0;
  for (const auto& om : organ_masks) {
    std::size_t hits = 0;
    for (const auto& v : component.voxels)
      if (om.mask.at(v.x, v.y, v.z) != 0) ++hits;
    if (hits == 0) continue;
    if (hits > best_hits || (hits == best_hits && om.organ < best.organ)) {
      best_hits = hits;
      best.organ = om.organ;
    }
  }
  if (best_hits == 0) return {kUnassignedOrgan, 0.0};
  best.overlap_fraction = static_cast<double>(best_hits) / static_cast<double>(component.voxels.size());
  return best;
}

std::vector<NamedMask> split_organ_map(const LabelVolume& organ_map,
                                       const std::map<int, std::string>& labels,
                                       const std::string& default_organ) {
  std::vector<NamedMask> out;
  auto extract = [&](const std::string& name, auto&& inside) {
    LabelVolume mask(organ_map.dims(), organ_map.spacing(), VoxelType::u8);
    auto dst = mask.voxels();
    auto src = organ_map.voxels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = inside(src[i]) ? 1 : 0;
    out.push_back({name, std::move(mask)});
  };
  if (labels.empty()) {
    extract(default_organ, [](std::int16_t v) { return v != 0; });
  } else {
    for (const auto& [value, name] : labels) extract(name, [value](std::int16_t v) { return v == value; });
  }
  return out;
}

}  // namespace mir3d
