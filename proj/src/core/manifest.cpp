#include "mir3d/core/manifest.hpp"

#include <set>

#include <json.hpp>

#include "mir3d/core/embedding_io.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"

namespace mir3d {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::set<std::string, std::less<>> kTopKeys{"dataset_name", "embedding_dim", "volumes"};
const std::set<std::string, std::less<>> kVolumeKeys{
    "volume_id",       "organ_tag",       "split",
    "slice_embeddings_path", "lesion_mask_path", "organ_mask_path",
    "caption_embedding_path", "lesion_flag", "lesion_group"};

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("manifest field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(where + key, "missing");
  return *it;
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, "expected string");
  return v.get<std::string>();
}

template <class Fn>
auto parse_enum(const json& v, const std::string& field, Fn parse) {
  std::string s = get_string(v, field);
  try {
    return parse(s);
  } catch (const ValidationError& e) {
    field_error(field, e.what());
  }
}

std::optional<fs::path> optional_path(const json& obj, const std::string& key,
                                      const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return fs::path(get_string(*it, where + key));
}

void reject_unknown(const json& obj, const std::set<std::string, std::less<>>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) field_error(where + key, "unknown key");
}

VolumeEntry parse_volume(const json& v, std::size_t i) {
  const std::string where = "volumes[" + std::to_string(i) + "].";
  if (!v.is_object()) field_error("volumes[" + std::to_string(i) + "]", "expected object");
  reject_unknown(v, kVolumeKeys, where);

  VolumeEntry e;
  e.volume_id = get_string(require(v, "volume_id", where), where + "volume_id");
  e.organ_tag = parse_enum(require(v, "organ_tag", where), where + "organ_tag", parse_organ);
  e.split = parse_enum(require(v, "split", where), where + "split", parse_split);
  e.slice_embeddings_path =
      get_string(require(v, "slice_embeddings_path", where), where + "slice_embeddings_path");
  e.lesion_mask_path = optional_path(v, "lesion_mask_path", where);
  e.organ_mask_path = optional_path(v, "organ_mask_path", where);
  e.caption_embedding_path = optional_path(v, "caption_embedding_path", where);

  const json& flag = require(v, "lesion_flag", where);
  if (!flag.is_boolean()) field_error(where + "lesion_flag", "expected boolean");
  e.lesion_flag = flag.get<bool>();

  if (auto it = v.find("lesion_group"); it != v.end() && !it->is_null())
    e.lesion_group = parse_enum(*it, where + "lesion_group", parse_lesion_group);
  return e;
}

}  // namespace

DatasetManifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("manifest: top level must be an object");
  reject_unknown(doc, kTopKeys, "");

  DatasetManifest m;
  m.dataset_name = get_string(require(doc, "dataset_name", ""), "dataset_name");
  const json& dim = require(doc, "embedding_dim", "");
  if (!dim.is_number_integer()) field_error("embedding_dim", "expected integer");
  if (dim.get<std::int64_t>() <= 0 || dim.get<std::int64_t>() > UINT32_MAX)
    throw ValidationError("embedding_dim must be positive");
  m.embedding_dim = dim.get<std::uint32_t>();

  const json& vols = require(doc, "volumes", "");
  if (!vols.is_array()) field_error("volumes", "expected array");
  m.volumes.reserve(vols.size());
  for (std::size_t i = 0; i < vols.size(); ++i) m.volumes.push_back(parse_volume(vols[i], i));

  m.validate();
  return m;
}

std::string serialize_manifest(const DatasetManifest& manifest) {
  json doc;
  doc["dataset_name"] = manifest.dataset_name;
  doc["embedding_dim"] = manifest.embedding_dim;
  json vols = json::array();
  for (const auto& v : manifest.volumes) {
    json e;
    e["volume_id"] = v.volume_id;
    e["organ_tag"] = to_string(v.organ_tag);
    e["split"] = to_string(v.split);
    e["slice_embeddings_path"] = v.slice_embeddings_path.generic_string();
    if (v.lesion_mask_path) e["lesion_mask_path"] = v.lesion_mask_path->generic_string();
    if (v.organ_mask_path) e["organ_mask_path"] = v.organ_mask_path->generic_string();
    if (v.caption_embedding_path)
      e["caption_embedding_path"] = v.caption_embedding_path->generic_string();
    e["lesion_flag"] = v.lesion_flag;
    if (v.lesion_group) e["lesion_group"] = to_string(*v.lesion_group);
    vols.push_back(std::move(e));
  }
  doc["volumes"] = std::move(vols);
  return doc.dump(2) + "\n";
}

DatasetManifest load_manifest(const fs::path& path) {
  DatasetManifest m = parse_manifest(read_text_file(path));
  m.base_dir = path.parent_path();
  return m;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  manifest.validate();
  write_file_atomic(path, serialize_manifest(manifest));
}

EmbeddingMatrix load_volume_embeddings(const DatasetManifest& manifest, const VolumeEntry& entry) {
  EmbeddingMatrix m = load_embeddings(manifest.resolve(entry.slice_embeddings_path), entry.volume_id);
  if (m.dim() != manifest.embedding_dim)
    throw ValidationError("volume '" + entry.volume_id + "': embedding dim " +
                          std::to_string(m.dim()) + " differs from dataset embedding_dim " +
                          std::to_string(manifest.embedding_dim));
  if (m.empty()) throw ValidationError("volume '" + entry.volume_id + "' has no slice embeddings");
  return m;
}

}  // namespace mir3d
