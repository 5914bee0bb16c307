#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "mir3d/core/types.hpp"

namespace mir3d {

// Sidecar header (JSON), e.g. `case_001.hdr`:
//   {"dims": [nx, ny, nz], "spacing_mm": [sx, sy, sz], "dtype": "u8",
//    "labels": {"1": "liver", "2": "pancreas"}}          ("labels" optional)
// Raw voxels live next to it with the `.raw` extension, little-endian,
// x-fastest.

struct LabelVolumeHeader {
  Dims dims;
  Spacing spacing;
  VoxelType dtype = VoxelType::u8;
  /// Label value -> organ name, for multi-label organ maps.
  std::map<int, std::string> labels;
};

LabelVolumeHeader parse_label_header(std::string_view text);
std::string serialize_label_header(const LabelVolumeHeader& header);

/// `case.hdr` -> `case.raw`
std::filesystem::path raw_path_for(const std::filesystem::path& header_path);

LabelVolume load_label_volume(const std::filesystem::path& header_path,
                              const std::filesystem::path& raw_path);
LabelVolume load_label_volume(const std::filesystem::path& header_path);

/// Writes header and raw file (both atomically).
void write_label_volume(const std::filesystem::path& header_path, const LabelVolume& volume,
                        const std::map<int, std::string>& labels = {});

std::string encode_voxels(const LabelVolume& volume);

}  // namespace mir3d
