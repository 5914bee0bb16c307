#include "mir3d/knn/vector_index.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "mir3d/core/embedding_io.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"

namespace mir3d {

namespace {

double squared_distance(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

}  // namespace

double euclidean_distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw ValidationError("euclidean_distance: dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  return std::sqrt(squared_distance(a.data(), b.data(), a.size()));
}

std::vector<Neighbor> VectorIndex::search(std::span<const float> query, std::size_t k,
                                          const Filter& accept) const {
  if (k == 0) throw ValidationError("search: k must be positive");
  if (query.size() != dim_ && !keys_.empty())
    throw ValidationError("search: query has dim " + std::to_string(query.size()) +
                          ", index has dim " + std::to_string(dim_));

  struct Candidate {
    double distance;
    std::size_t entry;
  };
  std::vector<Candidate> cands;
  cands.reserve(keys_.size());
  for (std::size_t e = 0; e < keys_.size(); ++e) {
    if (accept && !accept(e)) continue;
    cands.push_back({std::sqrt(squared_distance(query.data(), values_.data() + e * dim_, dim_)), e});
  }
  auto less = [this](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return keys_[a.entry] < keys_[b.entry];
  };
  const std::size_t take = std::min(k, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(),
                    less);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back({keys_[cands[i].entry], cands[i].distance, cands[i].entry});
  return out;
}

VectorIndexBuilder::VectorIndexBuilder(std::uint32_t dim, std::string kind) {
  if (dim == 0) throw ValidationError("index dim must be positive");
  index_.dim_ = dim;
  index_.kind_ = std::move(kind);
}

void VectorIndexBuilder::reserve(std::size_t n) {
  index_.keys_.reserve(n);
  index_.values_.reserve(n * index_.dim_);
}

void VectorIndexBuilder::add(std::string key, std::span<const float> vector) {
  if (vector.size() != index_.dim_)
    throw ValidationError("index entry '" + key + "' has dim " + std::to_string(vector.size()) +
                          ", index dim is " + std::to_string(index_.dim_));
  for (float v : vector)
    if (!std::isfinite(v)) throw ValidationError("index entry '" + key + "' has a non-finite component");
  if (!seen_.insert(key).second) throw ValidationError("duplicate index key '" + key + "'");
  index_.keys_.push_back(std::move(key));
  index_.values_.insert(index_.values_.end(), vector.begin(), vector.end());
}

VectorIndex VectorIndexBuilder::freeze() && { return std::move(index_); }

VectorIndex build_index(const std::vector<std::pair<std::string, std::vector<float>>>& items,
                        std::uint32_t dim, std::string kind) {
  VectorIndexBuilder b(dim, std::move(kind));
  b.reserve(items.size());
  for (const auto& [key, vec] : items) b.add(key, vec);
  return std::move(b).freeze();
}

std::string index_meta_line(const VectorIndex& index) {
  nlohmann::ordered_json meta;
  meta["kind"] = index.kind();
  meta["dim"] = index.dim();
  meta["count"] = index.size();
  meta["keys"] = index.keys();
  return meta.dump() + "\n";
}

namespace {
std::filesystem::path with_suffix(const std::filesystem::path& base, const char* suffix) {
  std::filesystem::path p = base;
  p += suffix;
  return p;
}
}  // namespace

void save_index(const VectorIndex& index, const std::filesystem::path& base) {
  std::vector<std::uint32_t> ordinals(index.size());
  for (std::size_t i = 0; i < ordinals.size(); ++i) ordinals[i] = static_cast<std::uint32_t>(i);
  std::vector<float> values;
  values.reserve(index.size() * index.dim());
  for (std::size_t i = 0; i < index.size(); ++i) {
    auto v = index.vector(i);
    values.insert(values.end(), v.begin(), v.end());
  }
  write_embeddings(with_suffix(base, ".emb"),
                   EmbeddingMatrix(index.kind(), index.dim(), std::move(ordinals), std::move(values)));
  write_file_atomic(with_suffix(base, ".meta"), index_meta_line(index));
}

VectorIndex load_index(const std::filesystem::path& base) {
  const auto meta_path = with_suffix(base, ".meta");
  const std::string text = read_text_file(meta_path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(meta_path.string() + ": " + e.what());
  }
  if (!meta.is_object() || !meta.contains("kind") || !meta.contains("dim") ||
      !meta.contains("keys") || !meta["keys"].is_array())
    throw ParseError(meta_path.string() + ": expected kind, dim and keys");

  const auto kind = meta["kind"].get<std::string>();
  const auto dim = meta["dim"].get<std::uint32_t>();
  const auto keys = meta["keys"].get<std::vector<std::string>>();

  const EmbeddingMatrix rows = load_embeddings(with_suffix(base, ".emb"));
  if (rows.dim() != dim || rows.rows() != keys.size())
    throw FormatError(base.string() + ": index vectors disagree with metadata (" +
                      std::to_string(rows.rows()) + " rows of dim " + std::to_string(rows.dim()) +
                      " vs " + std::to_string(keys.size()) + " keys of dim " + std::to_string(dim) + ")");
  VectorIndexBuilder b(dim, kind);
  b.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (rows.slice_index(i) != i) throw FormatError(base.string() + ": record ids are not ordinal");
    b.add(keys[i], rows.row(i));
  }
  return std::move(b).freeze();
}

}  // namespace mir3d
