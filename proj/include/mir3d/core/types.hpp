#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mir3d {

enum class Organ { liver, colon, pancreas, lung, other };
enum class Split { train, test };

/// Coarse per-volume lesion class. The order is for reporting only.
enum class LesionGroup : std::uint8_t { G0 = 0, G1 = 1, G2 = 2, G3 = 3 };

std::string_view to_string(Organ organ);
std::string_view to_string(Split split);
std::string_view to_string(LesionGroup group);

// Each parser throws ValidationError on an unknown name.
Organ parse_organ(std::string_view name);
Split parse_split(std::string_view name);
LesionGroup parse_lesion_group(std::string_view name);

struct VolumeEntry {
  std::string volume_id;
  Organ organ_tag = Organ::other;
  Split split = Split::train;
  std::filesystem::path slice_embeddings_path;
  std::optional<std::filesystem::path> lesion_mask_path;
  std::optional<std::filesystem::path> organ_mask_path;
  std::optional<std::filesystem::path> caption_embedding_path;
  bool lesion_flag = false;
  // Absent when the dataset carries only the binary flag.
  std::optional<LesionGroup> lesion_group;

  bool operator==(const VolumeEntry&) const = default;
};

struct DatasetManifest {
  std::string dataset_name;
  std::uint32_t embedding_dim = 0;
  std::vector<VolumeEntry> volumes;
  /// Directory that relative paths in the entries resolve against.
  /// Not serialized.
  std::filesystem::path base_dir;

  /// Throws ValidationError on the first broken invariant.
  void validate() const;

  const VolumeEntry* find(std::string_view volume_id) const;
  const VolumeEntry& at(std::string_view volume_id) const;
  std::vector<const VolumeEntry*> split(Split which) const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;

  bool operator==(const DatasetManifest& other) const {
    return dataset_name == other.dataset_name && embedding_dim == other.embedding_dim &&
           volumes == other.volumes;
  }
};

/// Ordered per-slice embeddings of one volume, stored row-major.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  /// Validates the invariants: `values.size() == slice_indices.size() * dim`,
  /// strictly increasing slice indices, finite components.
  EmbeddingMatrix(std::string volume_id, std::uint32_t dim,
                  std::vector<std::uint32_t> slice_indices, std::vector<float> values);

  const std::string& volume_id() const { return volume_id_; }
  std::uint32_t dim() const { return dim_; }
  std::size_t rows() const { return slice_indices_.size(); }
  bool empty() const { return slice_indices_.empty(); }
  std::uint32_t slice_index(std::size_t row) const { return slice_indices_[row]; }
  std::span<const float> row(std::size_t r) const {
    return {values_.data() + r * dim_, dim_};
  }
  std::span<const std::uint32_t> slice_indices() const { return slice_indices_; }
  std::span<const float> values() const { return values_; }

  EmbeddingMatrix with_volume_id(std::string volume_id) const;

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::string volume_id_;
  std::uint32_t dim_ = 0;
  std::vector<std::uint32_t> slice_indices_;
  std::vector<float> values_;
};

struct Dims {
  std::int64_t nx = 0;
  std::int64_t ny = 0;
  std::int64_t nz = 0;
  std::int64_t count() const { return nx * ny * nz; }
  bool operator==(const Dims&) const = default;
};

struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;
  double voxel_volume() const { return sx * sy * sz; }
  bool operator==(const Spacing&) const = default;
};

enum class VoxelType { u8, i16 };
std::string_view to_string(VoxelType t);
std::size_t voxel_size(VoxelType t);

/// 3D integer label grid, x-fastest.
class LabelVolume {
 public:
  LabelVolume() = default;
  LabelVolume(Dims dims, Spacing spacing, VoxelType dtype = VoxelType::u8);
  LabelVolume(Dims dims, Spacing spacing, VoxelType dtype, std::vector<std::int16_t> voxels);

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  VoxelType dtype() const { return dtype_; }

  std::size_t index(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return static_cast<std::size_t>(x + dims_.nx * (y + dims_.ny * z));
  }
  std::int16_t at(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return voxels_[index(x, y, z)];
  }
  void set(std::int64_t x, std::int64_t y, std::int64_t z, std::int16_t v) {
    voxels_[index(x, y, z)] = v;
  }
  std::span<const std::int16_t> voxels() const { return voxels_; }
  std::span<std::int16_t> voxels() { return voxels_; }

  bool is_binary() const;

  bool operator==(const LabelVolume&) const = default;

 private:
  Dims dims_;
  Spacing spacing_;
  VoxelType dtype_ = VoxelType::u8;
  std::vector<std::int16_t> voxels_;
};

}  // namespace mir3d
