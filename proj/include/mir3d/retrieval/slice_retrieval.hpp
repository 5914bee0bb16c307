#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mir3d/core/types.hpp"
#include "mir3d/knn/vector_index.hpp"
#include "mir3d/retrieval/ranked_list.hpp"

namespace mir3d {

inline constexpr std::size_t kDefaultSlicesPerQuery = 20;

/// Slice keys in the slice index are "<volume_id>#<slice_index>".
std::string slice_key(std::string_view volume_id, std::uint32_t slice_index);
/// Parent volume id of a slice key (text before the last '#').
std::string_view parent_volume(std::string_view slice_key);

struct RetrievedSlice {
  std::string slice_key;
  std::string parent_volume_id;
  double distance = 0.0;
  bool operator==(const RetrievedSlice&) const = default;
};

/// All slices retrieved for one query volume, one block of at most
/// `n_per_slice` per query slice, in query-slice order.
struct SlicePool {
  std::string query_volume_id;
  std::vector<RetrievedSlice> retrieved;
  std::size_t n_per_slice = kDefaultSlicesPerQuery;
  std::size_t num_query_slices = 0;
};

enum class SliceScoring { freq, max_score, score_sum };
std::string_view to_string(SliceScoring s);

struct VolumeScore {
  std::string volume_id;
  double score = 0.0;
  SliceScoring method = SliceScoring::freq;
};

/// Similarity of a retrieved slice: 1 / (1 + distance), in (0, 1].
double sim_score(double distance);

/// Indexes every slice of every given volume under its slice key.
VectorIndex build_slice_index(const std::vector<EmbeddingMatrix>& volumes, std::uint32_t dim);

/// Queries with every slice of `query`; slices whose parent is the query
/// volume itself are excluded before the top-n cut.
SlicePool retrieve_slice_pool(const EmbeddingMatrix& query, const VectorIndex& index,
                              std::size_t n_per_slice = kDefaultSlicesPerQuery);

// One score per distinct parent volume, ordered by volume id. Each throws
// ValidationError on an empty pool.

/// |slices of V in pool| / |pool|
std::vector<VolumeScore> score_freq(const SlicePool& pool);
/// max over V's retrieved slices of sim_score
std::vector<VolumeScore> score_max(const SlicePool& pool);
/// sum over V's retrieved slices of sim_score
std::vector<VolumeScore> score_sum(const SlicePool& pool);
std::vector<VolumeScore> score_pool(const SlicePool& pool, SliceScoring method);

/// Top-k by (score desc, volume_id asc).
RankedList rank_volumes(const std::vector<VolumeScore>& scores, std::size_t k);

}  // namespace mir3d
