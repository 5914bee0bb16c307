#include "mir3d/retrieval/volume_retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "mir3d/core/error.hpp"
#include "mir3d/retrieval/slice_retrieval.hpp"

namespace mir3d {

std::string_view to_string(PoolingMethod m) {
  switch (m) {
    case PoolingMethod::median: return "median";
    case PoolingMethod::max: return "max";
    case PoolingMethod::average: return "average";
    case PoolingMethod::std: return "std";
  }
  return "average";
}

PoolingMethod parse_pooling(std::string_view name) {
  for (auto m : kAllPoolings)
    if (to_string(m) == name) return m;
  throw ValidationError("unknown pooling method '" + std::string(name) +
                        "' (expected median, max, average or std)");
}

std::string volume_index_kind(PoolingMethod m) { return "volume-" + std::string(to_string(m)); }

PooledEmbedding pool_embeddings(const EmbeddingMatrix& matrix, PoolingMethod method) {
  if (matrix.empty())
    throw ValidationError("cannot pool volume '" + matrix.volume_id() + "' without slices");
  const std::size_t n = matrix.rows();
  const std::size_t dim = matrix.dim();
  PooledEmbedding out{matrix.volume_id(), method, std::vector<double>(dim, 0.0)};

  std::vector<double> column(n);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = matrix.row(i)[j];
    double& dst = out.vector[j];
    switch (method) {
      case PoolingMethod::median: {
        std::sort(column.begin(), column.end());
        dst = (n % 2 == 1) ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
        break;
      }
      case PoolingMethod::max:
        dst = *std::max_element(column.begin(), column.end());
        break;
      case PoolingMethod::average: {
        double sum = 0.0;
        for (double v : column) sum += v;
        dst = sum / static_cast<double>(n);
        break;
      }
      case PoolingMethod::std: {
        double sum = 0.0;
        for (double v : column) sum += v;
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        dst = std::sqrt(ss / static_cast<double>(n));
        break;
      }
    }
  }
  return out;
}

std::vector<float> pooled_vector_f32(const PooledEmbedding& pooled) {
  return {pooled.vector.begin(), pooled.vector.end()};
}

VectorIndex build_volume_index(const std::vector<EmbeddingMatrix>& volumes, std::uint32_t dim,
                               PoolingMethod method) {
  VectorIndexBuilder builder(dim, volume_index_kind(method));
  builder.reserve(volumes.size());
  for (const auto& m : volumes) {
    if (m.dim() != dim)
      throw ValidationError("volume '" + m.volume_id() + "' has embedding dim " +
                            std::to_string(m.dim()) + ", expected " + std::to_string(dim));
    builder.add(m.volume_id(), pooled_vector_f32(pool_embeddings(m, method)));
  }
  return std::move(builder).freeze();
}

RankedList volume_search(const VectorIndex& index, const EmbeddingMatrix& query,
                         PoolingMethod method, std::size_t k) {
  if (index.kind() != volume_index_kind(method))
    throw ValidationError("index kind '" + index.kind() + "' does not match query pooling '" +
                          volume_index_kind(method) + "'");
  RankedList out;
  out.method = volume_index_kind(method);
  const auto pooled = pooled_vector_f32(pool_embeddings(query, method));
  for (const auto& nb : index.search(pooled, k)) out.entries.push_back({nb.key, sim_score(nb.distance)});
  return out;
}

}  // namespace mir3d
