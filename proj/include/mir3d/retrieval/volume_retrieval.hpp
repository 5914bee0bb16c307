#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mir3d/core/types.hpp"
#include "mir3d/knn/vector_index.hpp"
#include "mir3d/retrieval/ranked_list.hpp"

namespace mir3d {

enum class PoolingMethod { median, max, average, std };

inline constexpr std::array<PoolingMethod, 4> kAllPoolings{
    PoolingMethod::median, PoolingMethod::max, PoolingMethod::average, PoolingMethod::std};

std::string_view to_string(PoolingMethod m);
PoolingMethod parse_pooling(std::string_view name);
/// Index metadata kind, e.g. "volume-average".
std::string volume_index_kind(PoolingMethod m);

struct PooledEmbedding {
  std::string volume_id;
  PoolingMethod method = PoolingMethod::average;
  std::vector<double> vector;
};

/// Column-wise reduction over the slices of `matrix`:
///   median  - even counts take the midpoint of the two middle values
///   max     - component-wise maximum
///   average - arithmetic mean
///   std     - population standard deviation (divide by n)
PooledEmbedding pool_embeddings(const EmbeddingMatrix& matrix, PoolingMethod method);

/// Pooled vector narrowed to the f32 storage used by indexes and queries.
std::vector<float> pooled_vector_f32(const PooledEmbedding& pooled);

/// One entry per volume keyed by volume id. Throws ValidationError naming
/// the first volume whose dim differs from `dim`.
VectorIndex build_volume_index(const std::vector<EmbeddingMatrix>& volumes, std::uint32_t dim,
                               PoolingMethod method);

/// Pools `query` with `method` and runs exact k-NN; score = sim_score(d).
/// Throws ValidationError when the index was built with another pooling.
RankedList volume_search(const VectorIndex& index, const EmbeddingMatrix& query,
                         PoolingMethod method, std::size_t k);

}  // namespace mir3d
