#include "mir3d/core/label_volume_io.hpp"

#include <json.hpp>

#include "mir3d/core/byte_order.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"

namespace mir3d {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

LabelVolumeHeader parse_label_header(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("label volume header: ") + e.what());
  }
  auto triple = [&](const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_array() || it->size() != 3)
      throw ParseError(std::string("label volume header: '") + key + "' must be a 3-element array");
    for (const auto& v : *it)
      if (!v.is_number()) throw ParseError(std::string("label volume header: '") + key + "' must be numeric");
    return *it;
  };
  if (!doc.is_object()) throw ParseError("label volume header: expected object");

  LabelVolumeHeader h;
  const json dims = triple("dims");
  for (const auto& v : dims)
    if (!v.is_number_integer()) throw ParseError("label volume header: 'dims' must be integers");
  h.dims = {dims[0].get<std::int64_t>(), dims[1].get<std::int64_t>(), dims[2].get<std::int64_t>()};
  if (h.dims.nx <= 0 || h.dims.ny <= 0 || h.dims.nz <= 0)
    throw ValidationError("label volume header: dims must be positive");

  const json sp = triple("spacing_mm");
  h.spacing = {sp[0].get<double>(), sp[1].get<double>(), sp[2].get<double>()};
  if (!(h.spacing.sx > 0) || !(h.spacing.sy > 0) || !(h.spacing.sz > 0))
    throw ValidationError("label volume header: spacing_mm components must be positive");

  auto dt = doc.find("dtype");
  if (dt == doc.end() || !dt->is_string()) throw ParseError("label volume header: missing 'dtype'");
  if (*dt == "u8")
    h.dtype = VoxelType::u8;
  else if (*dt == "i16")
    h.dtype = VoxelType::i16;
  else
    throw ParseError("label volume header: dtype must be \"u8\" or \"i16\"");

  if (auto lb = doc.find("labels"); lb != doc.end()) {
    if (!lb->is_object()) throw ParseError("label volume header: 'labels' must be an object");
    for (const auto& [k, v] : lb->items()) {
      if (!v.is_string()) throw ParseError("label volume header: label names must be strings");
      try {
        h.labels[std::stoi(k)] = v.get<std::string>();
      } catch (const std::logic_error&) {
        throw ParseError("label volume header: label key '" + k + "' is not an integer");
      }
    }
  }
  return h;
}

std::string serialize_label_header(const LabelVolumeHeader& h) {
  json doc;
  doc["dims"] = {h.dims.nx, h.dims.ny, h.dims.nz};
  doc["spacing_mm"] = {h.spacing.sx, h.spacing.sy, h.spacing.sz};
  doc["dtype"] = to_string(h.dtype);
  if (!h.labels.empty()) {
    json lb = json::object();
    for (const auto& [k, v] : h.labels) lb[std::to_string(k)] = v;
    doc["labels"] = std::move(lb);
  }
  return doc.dump() + "\n";
}

fs::path raw_path_for(const fs::path& header_path) {
  fs::path p = header_path;
  p.replace_extension(".raw");
  return p;
}

LabelVolume load_label_volume(const fs::path& header_path, const fs::path& raw_path) {
  const LabelVolumeHeader h = parse_label_header(read_text_file(header_path));
  const auto raw = read_binary_file(raw_path);
  const std::size_t expected = static_cast<std::size_t>(h.dims.count()) * voxel_size(h.dtype);
  if (raw.size() != expected)
    throw FormatError(raw_path.string() + ": raw length " + std::to_string(raw.size()) +
                      " bytes, header requires " + std::to_string(expected));

  std::vector<std::int16_t> voxels(static_cast<std::size_t>(h.dims.count()));
  if (h.dtype == VoxelType::u8) {
    for (std::size_t i = 0; i < voxels.size(); ++i) voxels[i] = raw[i];
  } else {
    for (std::size_t i = 0; i < voxels.size(); ++i) voxels[i] = le::get<std::int16_t>(raw, 2 * i);
  }
  return {h.dims, h.spacing, h.dtype, std::move(voxels)};
}

LabelVolume load_label_volume(const fs::path& header_path) {
  return load_label_volume(header_path, raw_path_for(header_path));
}

std::string encode_voxels(const LabelVolume& volume) {
  std::string out;
  out.reserve(volume.voxels().size() * voxel_size(volume.dtype()));
  if (volume.dtype() == VoxelType::u8) {
    for (auto v : volume.voxels()) out.push_back(static_cast<char>(static_cast<std::uint8_t>(v)));
  } else {
    for (auto v : volume.voxels()) le::put<std::int16_t>(out, v);
  }
  return out;
}

void write_label_volume(const fs::path& header_path, const LabelVolume& volume,
                        const std::map<int, std::string>& labels) {
  LabelVolumeHeader h{volume.dims(), volume.spacing(), volume.dtype(), labels};
  write_file_atomic(raw_path_for(header_path), encode_voxels(volume));
  write_file_atomic(header_path, serialize_label_header(h));
}

}  // namespace mir3d
