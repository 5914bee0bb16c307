#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mir3d/core/types.hpp"

namespace mir3d {

// Manifest document (JSON):
//
//   {
//     "dataset_name": "liver",
//     "embedding_dim": 512,
//     "volumes": [
//       {"volume_id": "liver_001", "organ_tag": "liver", "split": "train",
//        "slice_embeddings_path": "emb/liver_001.emb",
//        "lesion_mask_path": "masks/liver_001.hdr",        (optional)
//        "organ_mask_path": "masks/liver_001_organ.hdr",   (optional)
//        "caption_embedding_path": "cap/liver_001.emb",    (optional)
//        "lesion_flag": true, "lesion_group": "G2"}        (group optional)
//     ]
//   }
//
// Unknown keys are rejected. Relative paths resolve against the manifest's
// directory.

/// Throws ParseError (malformed document, with line/column or field path)
/// or ValidationError (broken invariant).
DatasetManifest parse_manifest(std::string_view text);

/// Deterministic serialization; `parse_manifest(serialize_manifest(m)) == m`.
std::string serialize_manifest(const DatasetManifest& manifest);

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Loads the slice embeddings of one entry, checking the dataset dimension
/// and rejecting volumes without slices.
EmbeddingMatrix load_volume_embeddings(const DatasetManifest& manifest, const VolumeEntry& entry);

}  // namespace mir3d
