#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mir3d/core/types.hpp"

namespace mir3d {

struct SynthConfig {
  int num_groups = 3;  ///< 2..4; group g carries lesion group G<g>
  int volumes_per_group = 20;
  int slices_per_volume = 10;
  std::uint32_t dim = 32;
  double cluster_separation = 10.0;
  double noise_sigma = 0.1;
  std::uint64_t seed = 42;
  bool with_captions = true;
  /// Rasterize lesion and organ masks whose recomputed labels match the
  /// planted group.
  bool with_masks = false;

  /// Throws ValidationError on an unusable configuration.
  void validate() const;
};

/// Planted-cluster corpus. Paths in the manifest are relative to the
/// dataset directory (see write_synth_dataset).
struct SynthDataset {
  DatasetManifest manifest;
  std::vector<std::vector<double>> centers;  ///< one per group
  std::map<std::string, EmbeddingMatrix> slice_embeddings;
  std::map<std::string, EmbeddingMatrix> caption_embeddings;  ///< one row each
  std::map<std::string, LabelVolume> lesion_masks;
  std::map<std::string, LabelVolume> organ_masks;
};

/// Group centres lie on random mutually orthogonal directions at distance
/// `cluster_separation` from the origin; every slice embedding is its
/// centre plus isotropic Gaussian noise. Each group is split 80/20
/// train/test by a seeded shuffle.
SynthDataset synth_generate(const SynthConfig& config);

/// Writes manifest.json, embeddings/, captions/ and masks/ under `dir`.
void write_synth_dataset(const SynthDataset& dataset, const std::filesystem::path& dir);

}  // namespace mir3d
