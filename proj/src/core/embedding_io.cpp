#include "mir3d/core/embedding_io.hpp"

#include <cmath>

#include "mir3d/core/byte_order.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"

namespace mir3d {

namespace {
constexpr std::size_t kHeaderSize = 9 + 1 + 4 + 8;
}

std::string encode_embeddings(const EmbeddingMatrix& matrix) {
  std::string out;
  out.reserve(kHeaderSize + matrix.rows() * (4 + 4 * std::size_t{matrix.dim()}));
  out.append(kEmbMagic);
  le::put<std::uint8_t>(out, kEmbVersion);
  le::put<std::uint32_t>(out, matrix.dim());
  le::put<std::uint64_t>(out, matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    le::put<std::uint32_t>(out, matrix.slice_index(r));
    for (float v : matrix.row(r)) le::put<float>(out, v);
  }
  return out;
}

EmbeddingMatrix decode_embeddings(std::span<const std::uint8_t> bytes, std::string volume_id) {
  if (bytes.size() < kHeaderSize ||
      std::string_view(reinterpret_cast<const char*>(bytes.data()), kEmbMagic.size()) != kEmbMagic)
    throw FormatError("embedding file: bad magic (expected 3DMIREMB1)");
  const auto version = le::get<std::uint8_t>(bytes, 9);
  if (version != kEmbVersion)
    throw FormatError("embedding file: unsupported version " + std::to_string(version));
  const auto dim = le::get<std::uint32_t>(bytes, 10);
  const auto count = le::get<std::uint64_t>(bytes, 14);
  if (dim == 0) throw FormatError("embedding file: dim must be positive");

  const std::size_t row_bytes = 4 + 4 * std::size_t{dim};
  const std::size_t payload = bytes.size() - kHeaderSize;
  if (count > payload / row_bytes || payload != count * row_bytes)
    throw TruncationError("embedding file: header declares " + std::to_string(count) +
                          " rows of dim " + std::to_string(dim) + " but payload holds " +
                          std::to_string(payload) + " bytes (" + std::to_string(payload / row_bytes) +
                          " whole rows)");

  std::vector<std::uint32_t> slices(count);
  std::vector<float> values(count * dim);
  std::size_t off = kHeaderSize;
  for (std::size_t r = 0; r < count; ++r) {
    slices[r] = le::get<std::uint32_t>(bytes, off);
    off += 4;
    for (std::size_t j = 0; j < dim; ++j, off += 4) {
      float v = le::get<float>(bytes, off);
      if (!std::isfinite(v))
        throw DataError("embedding file: non-finite component at row " + std::to_string(r) +
                        ", column " + std::to_string(j));
      values[r * dim + j] = v;
    }
  }
  return {std::move(volume_id), dim, std::move(slices), std::move(values)};
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, std::string volume_id) {
  auto bytes = read_binary_file(path);
  try {
    return decode_embeddings(bytes, std::move(volume_id));
  } catch (const FormatError& e) {
    // Re-throw the same type with the path attached.
    const std::string msg = path.string() + ": " + e.what();
    if (dynamic_cast<const TruncationError*>(&e)) throw TruncationError(msg);
    if (dynamic_cast<const DataError*>(&e)) throw DataError(msg);
    throw FormatError(msg);
  }
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix) {
  write_file_atomic(path, encode_embeddings(matrix));
}

}  // namespace mir3d
