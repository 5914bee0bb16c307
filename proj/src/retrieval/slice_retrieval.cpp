#include "mir3d/retrieval/slice_retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "mir3d/core/error.hpp"

namespace mir3d {

std::string slice_key(std::string_view volume_id, std::uint32_t slice_index) {
  std::string key(volume_id);
  key += '#';
  key += std::to_string(slice_index);
  return key;
}

std::string_view parent_volume(std::string_view key) {
  const auto pos = key.rfind('#');
  return pos == std::string_view::npos ? key : key.substr(0, pos);
}

std::string_view to_string(SliceScoring s) {
  switch (s) {
    case SliceScoring::freq: return "slice-freq";
    case SliceScoring::max_score: return "slice-max";
    case SliceScoring::score_sum: return "slice-sum";
  }
  return "slice-freq";
}

double sim_score(double distance) {
  if (!(distance >= 0.0)) throw ValidationError("sim_score: distance must be non-negative");
  return 1.0 / (1.0 + distance);
}

VectorIndex build_slice_index(const std::vector<EmbeddingMatrix>& volumes, std::uint32_t dim) {
  VectorIndexBuilder builder(dim, "slice");
  std::size_t total = 0;
  for (const auto& m : volumes) total += m.rows();
  builder.reserve(total);
  for (const auto& m : volumes) {
    if (m.dim() != dim)
      throw ValidationError("volume '" + m.volume_id() + "' has embedding dim " +
                            std::to_string(m.dim()) + ", expected " + std::to_string(dim));
    for (std::size_t r = 0; r < m.rows(); ++r)
      builder.add(slice_key(m.volume_id(), m.slice_index(r)), m.row(r));
  }
  return std::move(builder).freeze();
}

SlicePool retrieve_slice_pool(const EmbeddingMatrix& query, const VectorIndex& index,
                              std::size_t n_per_slice) {
  if (query.empty()) throw ValidationError("query volume '" + query.volume_id() + "' has no slices");
  if (n_per_slice == 0) throw ValidationError("n_per_slice must be positive");
  if (!index.empty() && query.dim() != index.dim())
    throw ValidationError("query dim " + std::to_string(query.dim()) + " differs from index dim " +
                          std::to_string(index.dim()));

  SlicePool pool;
  pool.query_volume_id = query.volume_id();
  pool.n_per_slice = n_per_slice;
  pool.num_query_slices = query.rows();
  if (index.empty()) return pool;

  // Entries owned by the query volume never enter the pool.
  std::vector<char> own(index.size(), 0);
  bool any_own = false;
  for (std::size_t e = 0; e < index.size(); ++e)
    if (parent_volume(index.key(e)) == query.volume_id()) own[e] = any_own = true;
  VectorIndex::Filter accept;
  if (any_own) accept = [&own](std::size_t e) { return own[e] == 0; };

  pool.retrieved.reserve(n_per_slice * query.rows());
  for (std::size_t r = 0; r < query.rows(); ++r) {
    for (auto& nb : index.search(query.row(r), n_per_slice, accept)) {
      std::string parent(parent_volume(nb.key));
      pool.retrieved.push_back({std::move(nb.key), std::move(parent), nb.distance});
    }
  }
  return pool;
}

namespace {

template <class Init, class Accumulate>
std::vector<VolumeScore> aggregate(const SlicePool& pool, SliceScoring method, Init init,
                                   Accumulate acc) {
  if (pool.retrieved.empty())
    throw ValidationError("cannot score an empty slice pool (query '" + pool.query_volume_id + "')");
  std::map<std::string_view, double> by_volume;
  for (const auto& s : pool.retrieved) {
    auto [it, inserted] = by_volume.try_emplace(s.parent_volume_id, init);
    it->second = acc(it->second, s);
  }
  std::vector<VolumeScore> out;
  out.reserve(by_volume.size());
  for (const auto& [id, score] : by_volume) out.push_back({std::string(id), score, method});
  return out;
}

}  // namespace

std::vector<VolumeScore> score_freq(const SlicePool& pool) {
  auto counts = aggregate(pool, SliceScoring::freq, 0.0,
                          [](double c, const RetrievedSlice&) { return c + 1.0; });
  const double total = static_cast<double>(pool.retrieved.size());
  for (auto& s : counts) s.score /= total;
  return counts;
}

std::vector<VolumeScore> score_max(const SlicePool& pool) {
  return aggregate(pool, SliceScoring::max_score, 0.0, [](double m, const RetrievedSlice& s) {
    return std::max(m, sim_score(s.distance));
  });
}

std::vector<VolumeScore> score_sum(const SlicePool& pool) {
  return aggregate(pool, SliceScoring::score_sum, 0.0,
                   [](double acc, const RetrievedSlice& s) { return acc + sim_score(s.distance); });
}

std::vector<VolumeScore> score_pool(const SlicePool& pool, SliceScoring method) {
  switch (method) {
    case SliceScoring::freq: return score_freq(pool);
    case SliceScoring::max_score: return score_max(pool);
    case SliceScoring::score_sum: return score_sum(pool);
  }
  return score_freq(pool);
}

RankedList rank_volumes(const std::vector<VolumeScore>& scores, std::size_t k) {
  if (k == 0) throw ValidationError("rank_volumes: k must be positive");
  if (scores.empty()) throw ValidationError("rank_volumes: no scores to rank");
  std::vector<const VolumeScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);
  auto better = [](const VolumeScore* a, const VolumeScore* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->volume_id < b->volume_id;
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    better);
  RankedList out;
  out.method = std::string(to_string(scores.front().method));
  out.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.entries.push_back({order[i]->volume_id, order[i]->score});
  return out;
}

}  // namespace mir3d
