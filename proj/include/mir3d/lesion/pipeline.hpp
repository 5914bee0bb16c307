#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mir3d/core/types.hpp"
#include "mir3d/lesion/components.hpp"
#include "mir3d/lesion/lesion_record.hpp"
#include "mir3d/lesion/organ_map.hpp"

namespace mir3d {

struct VolumeLesionReport {
  std::string volume_id;
  std::string organ;                  ///< organ the ground truth refers to
  std::vector<LesionRecord> lesions;  ///< every component, any organ
  std::vector<SliceMetrics> slices;   ///< slices that contain foreground
  // Ground truth derived from the lesions assigned to `organ`.
  int organ_lesion_count = 0;
  std::optional<double> largest_length_cm;
  bool lesion_flag = false;
  LesionGroup lesion_group = LesionGroup::G0;
};

/// Labels, measures and assigns every lesion of `lesion_mask`. When
/// `organ_masks` is empty, every lesion is attributed to `organ` with
/// overlap fraction 1.
VolumeLesionReport analyze_lesions(const std::string& volume_id, const std::string& organ,
                                   const LabelVolume& lesion_mask,
                                   const std::vector<NamedMask>& organ_masks,
                                   Connectivity connectivity = Connectivity::full26);

/// Loads the entry's lesion mask (required) and organ mask (optional) and
/// runs `analyze_lesions` for the entry's organ tag.
VolumeLesionReport analyze_manifest_entry(const DatasetManifest& manifest, const VolumeEntry& entry,
                                          Connectivity connectivity = Connectivity::full26);

struct GroundTruthMismatch {
  std::string volume_id;
  bool stored_flag = false;
  std::optional<LesionGroup> stored_group;
  bool computed_flag = false;
  LesionGroup computed_group = LesionGroup::G0;
};

/// Recomputes flag and group for every entry with a lesion mask and
/// returns the entries that disagree with the manifest.
std::vector<GroundTruthMismatch> check_ground_truth(const DatasetManifest& manifest,
                                                    Connectivity connectivity = Connectivity::full26);

}  // namespace mir3d
