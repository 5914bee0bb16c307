#include "mir3d/core/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "mir3d/core/error.hpp"

namespace mir3d {

namespace {

constexpr std::array<std::pair<Organ, std::string_view>, 5> kOrganNames{{
    {Organ::liver, "liver"},
    {Organ::colon, "colon"},
    {Organ::pancreas, "pancreas"},
    {Organ::lung, "lung"},
    {Organ::other, "other"},
}};

constexpr std::array<std::string_view, 4> kGroupNames{"G0", "G1", "G2", "G3"};

}  // namespace

std::string_view to_string(Organ organ) {
  for (const auto& [o, name] : kOrganNames)
    if (o == organ) return name;
  return "other";
}

std::string_view to_string(Split split) { return split == Split::train ? "train" : "test"; }

std::string_view to_string(LesionGroup group) {
  return kGroupNames[static_cast<std::size_t>(group)];
}

Organ parse_organ(std::string_view name) {
  for (const auto& [o, n] : kOrganNames)
    if (n == name) return o;
  throw ValidationError("unknown organ tag '" + std::string(name) + "'");
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  throw ValidationError("unknown split '" + std::string(name) + "' (expected train or test)");
}

LesionGroup parse_lesion_group(std::string_view name) {
  for (std::size_t i = 0; i < kGroupNames.size(); ++i)
    if (kGroupNames[i] == name) return static_cast<LesionGroup>(i);
  throw ValidationError("unknown lesion group '" + std::string(name) + "'");
}

void DatasetManifest::validate() const {
  if (embedding_dim == 0) throw ValidationError("embedding_dim must be positive");
  std::unordered_set<std::string_view> seen;
  for (const auto& v : volumes) {
    if (v.volume_id.empty()) throw ValidationError("empty volume_id");
    if (v.volume_id.find('#') != std::string::npos)
      throw ValidationError("volume_id '" + v.volume_id + "' must not contain '#'");
    if (!seen.insert(v.volume_id).second)
      throw ValidationError("duplicate volume_id '" + v.volume_id + "'");
    if (v.lesion_group && v.lesion_flag != (*v.lesion_group != LesionGroup::G0))
      throw ValidationError("volume '" + v.volume_id + "': lesion_flag=" +
                            (v.lesion_flag ? "true" : "false") + " inconsistent with lesion_group=" +
                            std::string(to_string(*v.lesion_group)));
    if (v.slice_embeddings_path.empty())
      throw ValidationError("volume '" + v.volume_id + "': missing slice_embeddings_path");
  }
}

const VolumeEntry* DatasetManifest::find(std::string_view volume_id) const {
  auto it = std::find_if(volumes.begin(), volumes.end(),
                         [&](const VolumeEntry& v) { return v.volume_id == volume_id; });
  return it == volumes.end() ? nullptr : &*it;
}

const VolumeEntry& DatasetManifest::at(std::string_view volume_id) const {
  if (const auto* v = find(volume_id)) return *v;
  throw ValidationError("unknown volume id '" + std::string(volume_id) + "'");
}

std::vector<const VolumeEntry*> DatasetManifest::split(Split which) const {
  std::vector<const VolumeEntry*> out;
  for (const auto& v : volumes)
    if (v.split == which) out.push_back(&v);
  return out;
}

std::filesystem::path DatasetManifest::resolve(const std::filesystem::path& p) const {
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

EmbeddingMatrix::EmbeddingMatrix(std::string volume_id, std::uint32_t dim,
                                 std::vector<std::uint32_t> slice_indices,
                                 std::vector<float> values)
    : volume_id_(std::move(volume_id)),
      dim_(dim),
      slice_indices_(std::move(slice_indices)),
      values_(std::move(values)) {
  if (dim_ == 0) throw ValidationError("embedding dim must be positive");
  if (values_.size() != slice_indices_.size() * dim_)
    throw ValidationError("embedding matrix '" + volume_id_ + "': " +
                          std::to_string(values_.size()) + " values for " +
                          std::to_string(slice_indices_.size()) + " rows of dim " +
                          std::to_string(dim_));
  for (std::size_t i = 1; i < slice_indices_.size(); ++i)
    if (slice_indices_[i] <= slice_indices_[i - 1])
      throw ValidationError("embedding matrix '" + volume_id_ +
                            "': slice indices not strictly increasing at row " +
                            std::to_string(i));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw DataError("embedding matrix '" + volume_id_ + "': non-finite component in row " +
                      std::to_string(i / dim_));
}

EmbeddingMatrix EmbeddingMatrix::with_volume_id(std::string volume_id) const {
  EmbeddingMatrix copy = *this;
  copy.volume_id_ = std::move(volume_id);
  return copy;
}

std::string_view to_string(VoxelType t) { return t == VoxelType::u8 ? "u8" : "i16"; }

std::size_t voxel_size(VoxelType t) { return t == VoxelType::u8 ? 1 : 2; }

LabelVolume::LabelVolume(Dims dims, Spacing spacing, VoxelType dtype)
    : LabelVolume(dims, spacing, dtype,
                  std::vector<std::int16_t>(
                      static_cast<std::size_t>(std::max<std::int64_t>(dims.count(), 0)), 0)) {}

LabelVolume::LabelVolume(Dims dims, Spacing spacing, VoxelType dtype,
                         std::vector<std::int16_t> voxels)
    : dims_(dims), spacing_(spacing), dtype_(dtype), voxels_(std::move(voxels)) {
  if (dims_.nx <= 0 || dims_.ny <= 0 || dims_.nz <= 0)
    throw ValidationError("label volume dims must be positive");
  if (!(spacing_.sx > 0) || !(spacing_.sy > 0) || !(spacing_.sz > 0))
    throw ValidationError("label volume spacing must be positive");
  if (static_cast<std::int64_t>(voxels_.size()) != dims_.count())
    throw ValidationError("label volume has " + std::to_string(voxels_.size()) +
                          " voxels, dims require " + std::to_string(dims_.count()));
  if (dtype_ == VoxelType::u8)
    for (auto v : voxels_)
      if (v < 0 || v > 255) throw ValidationError("u8 label volume holds value out of range");
}

bool LabelVolume::is_binary() const {
  return std::all_of(voxels_.begin(), voxels_.end(), [](std::int16_t v) { return v == 0 || v == 1; });
}

}  // namespace mir3d
