#include "mir3d/eval/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "mir3d/core/embedding_io.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/manifest.hpp"
#include "mir3d/util/parallel.hpp"

namespace mir3d {

namespace {

constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

constexpr std::array<std::pair<MethodSpec, std::string_view>, 9> kMethodNames{{
    {MethodSpec::slice_freq, "slice-freq"},
    {MethodSpec::slice_max, "slice-max"},
    {MethodSpec::slice_sum, "slice-sum"},
    {MethodSpec::volume_median, "volume-median"},
    {MethodSpec::volume_max, "volume-max"},
    {MethodSpec::volume_average, "volume-average"},
    {MethodSpec::volume_std, "volume-std"},
    {MethodSpec::caption, "caption"},
    {MethodSpec::ensemble, "ensemble"},
}};

SliceScoring slice_scoring_of(MethodSpec m) {
  switch (m) {
    case MethodSpec::slice_max: return SliceScoring::max_score;
    case MethodSpec::slice_sum: return SliceScoring::score_sum;
    default: return SliceScoring::freq;
  }
}

}  // namespace

std::string_view to_string(MethodSpec m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "slice-freq";
}

MethodSpec parse_method(std::string_view name) {
  for (const auto& [method, n] : kMethodNames)
    if (n == name) return method;
  throw ValidationError("unknown method '" + std::string(name) + "'");
}

bool uses_slice_index(MethodSpec m) { return !pooling_of(m).has_value(); }

bool uses_caption(MethodSpec m) { return m == MethodSpec::caption || m == MethodSpec::ensemble; }

std::optional<PoolingMethod> pooling_of(MethodSpec m) {
  switch (m) {
    case MethodSpec::volume_median: return PoolingMethod::median;
    case MethodSpec::volume_max: return PoolingMethod::max;
    case MethodSpec::volume_average: return PoolingMethod::average;
    case MethodSpec::volume_std: return PoolingMethod::std;
    default: return std::nullopt;
  }
}

std::string index_name(MethodSpec m) {
  if (auto p = pooling_of(m)) return volume_index_kind(*p);
  return "slice";
}

const VectorIndex& IndexSet::slice_index() const {
  if (!slice) throw ValidationError("slice index not available");
  return *slice;
}

const VectorIndex& IndexSet::volume_index(PoolingMethod m) const {
  auto it = volume.find(m);
  if (it == volume.end()) throw ValidationError("index '" + volume_index_kind(m) + "' not available");
  return it->second;
}

IndexSet build_indexes(const DatasetManifest& manifest, std::span<const MethodSpec> methods) {
  std::vector<EmbeddingMatrix> train;
  for (const auto* e : manifest.split(Split::train)) train.push_back(load_volume_embeddings(manifest, *e));

  IndexSet set;
  for (auto m : methods) {
    if (auto p = pooling_of(m)) {
      if (!set.volume.contains(*p)) set.volume.emplace(*p, build_volume_index(train, manifest.embedding_dim, *p));
    } else if (!set.slice) {
      set.slice = build_slice_index(train, manifest.embedding_dim);
    }
  }
  return set;
}

void check_split_leakage(const DatasetManifest& manifest, const IndexSet& indexes) {
  std::unordered_set<std::string_view> train, test;
  for (const auto& v : manifest.volumes) (v.split == Split::train ? train : test).insert(v.volume_id);
  for (auto id : test)
    if (train.contains(id))
      throw ValidationError("split leakage: volume '" + std::string(id) + "' is in both train and test");

  auto check_key = [&](std::string_view owner, const std::string& index) {
    if (train.contains(owner)) return;
    throw ValidationError("split leakage: index '" + index + "' holds volume '" + std::string(owner) +
                          "', which is not a train volume");
  };
  if (indexes.slice)
    for (const auto& key : indexes.slice->keys()) check_key(parent_volume(key), "slice");
  for (const auto& [pooling, index] : indexes.volume)
    for (const auto& key : index.keys()) check_key(key, index.kind());
}

RankedList retrieve(const IndexSet& indexes, MethodSpec method, const QueryInput& query, std::size_t k,
                    const RetrievalOptions& options) {
  if (k == 0) throw ValidationError("k must be positive");
  auto need_slices = [&]() -> const EmbeddingMatrix& {
    if (!query.slices) throw ValidationError("query '" + query.volume_id + "' has no slice embeddings");
    return *query.slices;
  };
  auto need_caption = [&]() -> const std::vector<float>& {
    if (!query.caption) throw ValidationError("query '" + query.volume_id + "' has no caption embedding");
    return *query.caption;
  };
  auto slice_ranking = [&](MethodSpec m, std::size_t depth) {
    const SlicePool pool = retrieve_slice_pool(need_slices(), indexes.slice_index(), options.n_per_slice);
    const SliceScoring scoring = slice_scoring_of(m);
    if (pool.retrieved.empty()) return RankedList{std::string(to_string(scoring)), {}};
    return rank_volumes(score_pool(pool, scoring), depth);
  };

  switch (method) {
    case MethodSpec::slice_freq:
    case MethodSpec::slice_max:
    case MethodSpec::slice_sum:
      return slice_ranking(method, k);
    case MethodSpec::caption:
      return caption_query(need_caption(), indexes.slice_index(), options.caption_n, k, query.volume_id);
    case MethodSpec::ensemble: {
      const RankedList by_caption =
          caption_query(need_caption(), indexes.slice_index(), options.caption_n, kAll, query.volume_id);
      const RankedList by_slices = slice_ranking(MethodSpec::slice_freq, kAll);
      return ensemble_interleave(by_caption, by_slices, {options.ensemble_first, k});
    }
    default: {
      const PoolingMethod p = *pooling_of(method);
      return volume_search(indexes.volume_index(p), need_slices(), p, k);
    }
  }
}

RankedList complete_ranking(RankedList ranked, std::span<const std::string> candidates) {
  std::unordered_set<std::string_view> present;
  for (const auto& e : ranked.entries) present.insert(e.volume_id);
  std::vector<std::string> rest;
  for (const auto& c : candidates)
    if (!present.contains(c)) rest.push_back(c);
  std::sort(rest.begin(), rest.end());
  for (auto& id : rest) ranked.entries.push_back({std::move(id), 0.0});
  return ranked;
}

QueryInput load_query_input(const DatasetManifest& manifest, const VolumeEntry& entry, MethodSpec method) {
  QueryInput q;
  q.volume_id = entry.volume_id;
  if (method != MethodSpec::caption) q.slices = load_volume_embeddings(manifest, entry);
  if (uses_caption(method)) {
    if (!entry.caption_embedding_path)
      throw ValidationError("volume '" + entry.volume_id + "' has no caption_embedding_path");
    const EmbeddingMatrix cap = load_embeddings(manifest.resolve(*entry.caption_embedding_path), entry.volume_id);
    if (cap.rows() != 1 || cap.dim() != manifest.embedding_dim)
      throw ValidationError("volume '" + entry.volume_id + "': caption embedding must be one row of dim " +
                            std::to_string(manifest.embedding_dim));
    q.caption = std::vector<float>(cap.row(0).begin(), cap.row(0).end());
  }
  return q;
}

MetricReport run_experiment(const DatasetManifest& manifest, const IndexSet& indexes, MethodSpec method,
                            RelevanceCriterion criterion, const ExperimentOptions& options) {
  check_split_leakage(manifest, indexes);
  for (auto k : options.k_list)
    if (k == 0) throw ValidationError("k values must be positive");

  std::vector<const VolumeEntry*> queries = manifest.split(Split::test);
  const std::vector<const VolumeEntry*> train = manifest.split(Split::train);
  std::sort(queries.begin(), queries.end(),
            [](const VolumeEntry* a, const VolumeEntry* b) { return a->volume_id < b->volume_id; });
  if (queries.empty()) throw ValidationError("manifest has no test volumes to query");

  if (criterion == RelevanceCriterion::group)
    for (const auto& v : manifest.volumes)
      if (!v.lesion_group) throw ValidationError("criterion 'group' needs lesion_group labels; volume '" +
                                                 v.volume_id + "' has none");

  std::vector<std::string> missing;
  for (const auto* q : queries) {
    std::vector<std::filesystem::path> need;
    if (method != MethodSpec::caption) need.push_back(q->slice_embeddings_path);
    if (uses_caption(method) && q->caption_embedding_path) need.push_back(*q->caption_embedding_path);
    for (const auto& p : need)
      if (!std::filesystem::exists(manifest.resolve(p))) {
        missing.push_back(q->volume_id);
        break;
      }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw IoError("missing embeddings for test volume(s): " + list);
  }

  std::vector<std::string> candidates;
  std::unordered_map<std::string_view, const VolumeEntry*> by_id;
  for (const auto* t : train) {
    candidates.push_back(t->volume_id);
    by_id.emplace(t->volume_id, t);
  }

  MetricReport report;
  report.method = std::string(to_string(method));
  report.criterion = criterion;
  report.num_queries = queries.size();
  report.per_query.resize(queries.size());

  const unsigned threads = options.threads ? options.threads : default_thread_count();
  parallel_for(queries.size(), threads, [&](std::size_t qi) {
    const VolumeEntry& q = *queries[qi];
    const QueryInput input = load_query_input(manifest, q, method);
    const RankedList ranking =
        complete_ranking(retrieve(indexes, method, input, kAll, options.retrieval), candidates);

    std::vector<std::uint8_t> relevance;
    relevance.reserve(ranking.entries.size());
    for (const auto& e : ranking.entries) {
      auto it = by_id.find(e.volume_id);
      if (it == by_id.end())
        throw ValidationError("ranking for '" + q.volume_id + "' returned non-train volume '" + e.volume_id + "'");
      relevance.push_back(is_relevant(q, *it->second, criterion) ? 1 : 0);
    }
    std::size_t total_relevant = 0;
    for (const auto* t : train) total_relevant += is_relevant(q, *t, criterion);

    QueryMetrics m;
    m.query_id = q.volume_id;
    for (auto k : options.k_list) m.p_at[k] = precision_at_k(relevance, k);
    if (total_relevant > 0) {
      std::span<const std::uint8_t> judged(relevance);
      if (options.ap_depth) judged = judged.first(std::min(*options.ap_depth, judged.size()));
      m.ap = average_precision(judged, total_relevant);
    }
    report.per_query[qi] = std::move(m);
  });

  for (auto k : options.k_list) {
    double sum = 0.0;
    for (const auto& m : report.per_query) sum += m.p_at.at(k);
    report.macro["P@" + std::to_string(k)] = sum / static_cast<double>(report.per_query.size());
  }
  double ap_sum = 0.0;
  std::size_t ap_count = 0;
  for (const auto& m : report.per_query)
    if (m.ap) ap_sum += *m.ap, ++ap_count;
  if (ap_count > 0) report.macro["AP"] = ap_sum / static_cast<double>(ap_count);
  return report;
}

MetricReport run_experiment(const DatasetManifest& manifest, MethodSpec method, RelevanceCriterion criterion,
                            const ExperimentOptions& options) {
  // Leakage across splits is checked before any embedding is read.
  check_split_leakage(manifest, IndexSet{});
  const std::array<MethodSpec, 1> methods{method};
  return run_experiment(manifest, build_indexes(manifest, methods), method, criterion, options);
}

}  // namespace mir3d
