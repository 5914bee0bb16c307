#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace mir3d {

struct LesionRecord {
  int lesion_id = 0;
  std::string volume_id;
  std::string organ;
  double organ_overlap_fraction = 0.0;
  std::size_t voxel_count = 0;
  double physical_volume_mm3 = 0.0;
  std::array<double, 3> centroid_mm{};
  std::array<double, 3> ellipsoid_axes_mm{};
  double length_cm = 0.0;
  double elongation = 1.0;
  double flatness = 1.0;
};

struct SliceMetrics {
  std::string volume_id;
  int slice_index = 0;
  double total_lesion_area_mm2 = 0.0;
  int lesion_count_2d = 0;
  std::vector<double> circularities;
};

// One JSON object per line, keys named after the fields.
std::string lesion_record_line(const LesionRecord& r);
LesionRecord parse_lesion_record(std::string_view line);
std::string slice_metrics_line(const SliceMetrics& m);

/// Parses a whole JSON-lines file; blank lines are skipped.
std::vector<LesionRecord> parse_lesion_records(std::string_view text);

}  // namespace mir3d
