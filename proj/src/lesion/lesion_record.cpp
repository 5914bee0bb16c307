#include "mir3d/lesion/lesion_record.hpp"

#include <json.hpp>

#include "mir3d/core/error.hpp"

namespace mir3d {

using ojson = nlohmann::ordered_json;

std::string lesion_record_line(const LesionRecord& r) {
  ojson j;
  j["lesion_id"] = r.lesion_id;
  j["volume_id"] = r.volume_id;
  j["organ"] = r.organ;
  j["organ_overlap_fraction"] = r.organ_overlap_fraction;
  j["voxel_count"] = r.voxel_count;
  j["physical_volume_mm3"] = r.physical_volume_mm3;
  j["centroid_mm"] = r.centroid_mm;
  j["ellipsoid_axes_mm"] = r.ellipsoid_axes_mm;
  j["length_cm"] = r.length_cm;
  j["elongation"] = r.elongation;
  j["flatness"] = r.flatness;
  return j.dump() + "\n";
}

LesionRecord parse_lesion_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    LesionRecord r;
    r.lesion_id = j.at("lesion_id").get<int>();
    r.volume_id = j.at("volume_id").get<std::string>();
    r.organ = j.at("organ").get<std::string>();
    r.organ_overlap_fraction = j.at("organ_overlap_fraction").get<double>();
    r.voxel_count = j.at("voxel_count").get<std::size_t>();
    r.physical_volume_mm3 = j.at("physical_volume_mm3").get<double>();
    r.centroid_mm = j.at("centroid_mm").get<std::array<double, 3>>();
    r.ellipsoid_axes_mm = j.at("ellipsoid_axes_mm").get<std::array<double, 3>>();
    r.length_cm = j.at("length_cm").get<double>();
    r.elongation = j.value("elongation", 1.0);
    r.flatness = j.value("flatness", 1.0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("lesion record: ") + e.what());
  }
}

std::vector<LesionRecord> parse_lesion_records(std::string_view text) {
  std::vector<LesionRecord> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_lesion_record(line));
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    start = end + 1;
  }
  return out;
}

std::string slice_metrics_line(const SliceMetrics& m) {
  ojson j;
  j["volume_id"] = m.volume_id;
  j["slice_index"] = m.slice_index;
  j["total_lesion_area_mm2"] = m.total_lesion_area_mm2;
  j["lesion_count_2d"] = m.lesion_count_2d;
  j["circularities"] = m.circularities;
  return j.dump() + "\n";
}

}  // namespace mir3d
