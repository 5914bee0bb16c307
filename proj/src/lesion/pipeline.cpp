#include "mir3d/lesion/pipeline.hpp"

#include <algorithm>

#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"
#include "mir3d/core/label_volume_io.hpp"
#include "mir3d/lesion/grouping.hpp"
#include "mir3d/lesion/morphology.hpp"
#include "mir3d/lesion/slice_metrics.hpp"

namespace mir3d {

VolumeLesionReport analyze_lesions(const std::string& volume_id, const std::string& organ,
                                   const LabelVolume& lesion_mask,
                                   const std::vector<NamedMask>& organ_masks,
                                   Connectivity connectivity) {
  VolumeLesionReport rep;
  rep.volume_id = volume_id;
  rep.organ = organ;

  std::vector<double> organ_lengths;
  for (const auto& comp : connected_components(lesion_mask, connectivity)) {
    const Morphology m = lesion_morphology(comp, lesion_mask.spacing());
    const OrganAssignment a = organ_masks.empty()
                                  ? OrganAssignment{organ, 1.0}
                                  : map_lesion_to_organ(comp, lesion_mask.dims(), organ_masks);
    LesionRecord r;
    r.lesion_id = comp.lesion_id;
    r.volume_id = volume_id;
    r.organ = a.organ;
    r.organ_overlap_fraction = a.overlap_fraction;
    r.voxel_count = m.voxel_count;
    r.physical_volume_mm3 = m.physical_volume_mm3;
    r.centroid_mm = m.centroid_mm;
    r.ellipsoid_axes_mm = m.ellipsoid_axes_mm;
    r.length_cm = m.length_cm;
    r.elongation = m.elongation;
    r.flatness = m.flatness;
    if (r.organ == organ) organ_lengths.push_back(r.length_cm);
    rep.lesions.push_back(std::move(r));
  }

  rep.organ_lesion_count = static_cast<int>(organ_lengths.size());
  if (!organ_lengths.empty())
    rep.largest_length_cm = *std::max_element(organ_lengths.begin(), organ_lengths.end());
  rep.lesion_group = classify_lesion_group(organ_lengths);
  rep.lesion_flag = rep.lesion_group != LesionGroup::G0;

  for (std::int64_t z = 0; z < lesion_mask.dims().nz; ++z) {
    bool any = false;
    for (std::int64_t y = 0; y < lesion_mask.dims().ny && !any; ++y)
      for (std::int64_t x = 0; x < lesion_mask.dims().nx && !any; ++x) any = lesion_mask.at(x, y, z) != 0;
    if (any) rep.slices.push_back(slice_metrics(lesion_mask, z, volume_id));
  }
  return rep;
}

VolumeLesionReport analyze_manifest_entry(const DatasetManifest& manifest, const VolumeEntry& entry,
                                          Connectivity connectivity) {
  if (!entry.lesion_mask_path)
    throw ValidationError("volume '" + entry.volume_id + "' has no lesion_mask_path");
  const std::string organ(to_string(entry.organ_tag));
  const LabelVolume lesions = load_label_volume(manifest.resolve(*entry.lesion_mask_path));
  std::vector<NamedMask> organs;
  if (entry.organ_mask_path) {
    const auto header_path = manifest.resolve(*entry.organ_mask_path);
    const LabelVolume organ_map = load_label_volume(header_path);
    organs = split_organ_map(organ_map, parse_label_header(read_text_file(header_path)).labels, organ);
  }
  return analyze_lesions(entry.volume_id, organ, lesions, organs, connectivity);
}

std::vector<GroundTruthMismatch> check_ground_truth(const DatasetManifest& manifest,
                                                    Connectivity connectivity) {
  std::vector<GroundTruthMismatch> out;
  for (const auto& e : manifest.volumes) {
    if (!e.lesion_mask_path) continue;
    const auto rep = analyze_manifest_entry(manifest, e, connectivity);
    const bool group_ok = !e.lesion_group || *e.lesion_group == rep.lesion_group;
    if (e.lesion_flag != rep.lesion_flag || !group_ok)
      out.push_back({e.volume_id, e.lesion_flag, e.lesion_group, rep.lesion_flag, rep.lesion_group});
  }
  return out;
}

}  // namespace mir3d
