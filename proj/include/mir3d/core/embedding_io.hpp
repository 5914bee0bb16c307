#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "mir3d/core/types.hpp"

namespace mir3d {

// EMB1 layout, all integers and floats little-endian:
//
//   "3DMIREMB1"            9 bytes magic
//   u8   version = 1
//   u32  dim
//   u64  row count
//   row count x { u32 slice_index; dim x f32 }

inline constexpr std::string_view kEmbMagic = "3DMIREMB1";
inline constexpr std::uint8_t kEmbVersion = 1;

std::string encode_embeddings(const EmbeddingMatrix& matrix);

/// Throws FormatError (bad magic/version), TruncationError (payload size
/// disagrees with the header), DataError (non-finite component).
EmbeddingMatrix decode_embeddings(std::span<const std::uint8_t> bytes, std::string volume_id = {});

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, std::string volume_id = {});
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix);

}  // namespace mir3d
