#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mir3d/core/types.hpp"
#include "mir3d/eval/metrics.hpp"
#include "mir3d/knn/vector_index.hpp"
#include "mir3d/retrieval/multimodal.hpp"
#include "mir3d/retrieval/ranked_list.hpp"
#include "mir3d/retrieval/slice_retrieval.hpp"
#include "mir3d/retrieval/volume_retrieval.hpp"

namespace mir3d {

enum class MethodSpec {
  slice_freq,
  slice_max,
  slice_sum,
  volume_median,
  volume_max,
  volume_average,
  volume_std,
  caption,
  ensemble,
};

inline constexpr std::array<MethodSpec, 9> kAllMethods{
    MethodSpec::slice_freq,     MethodSpec::slice_max,  MethodSpec::slice_sum,
    MethodSpec::volume_median,  MethodSpec::volume_max, MethodSpec::volume_average,
    MethodSpec::volume_std,     MethodSpec::caption,    MethodSpec::ensemble};

std::string_view to_string(MethodSpec m);
MethodSpec parse_method(std::string_view name);

bool uses_slice_index(MethodSpec m);
bool uses_caption(MethodSpec m);
std::optional<PoolingMethod> pooling_of(MethodSpec m);
/// Index file stem inside an index directory: "slice" or "volume-<pooling>".
std::string index_name(MethodSpec m);

/// Indexes over the train split.
struct IndexSet {
  std::optional<VectorIndex> slice;
  std::map<PoolingMethod, VectorIndex> volume;

  /// Throws ValidationError naming the method when its index is absent.
  const VectorIndex& slice_index() const;
  const VectorIndex& volume_index(PoolingMethod m) const;
};

/// Loads embeddings of train volumes only and builds the indexes the given
/// methods need.
IndexSet build_indexes(const DatasetManifest& manifest, std::span<const MethodSpec> methods);

/// Throws ValidationError when a volume id appears in both splits or when
/// an index holds anything other than train volumes.
void check_split_leakage(const DatasetManifest& manifest, const IndexSet& indexes);

struct QueryInput {
  std::string volume_id;
  std::optional<EmbeddingMatrix> slices;
  std::optional<std::vector<float>> caption;
};

struct RetrievalOptions {
  std::size_t n_per_slice = kDefaultSlicesPerQuery;
  std::size_t caption_n = kDefaultSlicesPerQuery;
  EnsembleFirst ensemble_first = EnsembleFirst::caption;
};

/// Top-k volumes for one query under one method.
RankedList retrieve(const IndexSet& indexes, MethodSpec method, const QueryInput& query, std::size_t k,
                    const RetrievalOptions& options = {});

/// Appends every candidate absent from `ranked` with score 0, by id.
RankedList complete_ranking(RankedList ranked, std::span<const std::string> candidates);

struct QueryMetrics {
  std::string query_id;
  std::map<std::size_t, double> p_at;
  /// Absent when no indexed volume is relevant to the query.
  std::optional<double> ap;
};

struct MetricReport {
  std::string method;
  RelevanceCriterion criterion = RelevanceCriterion::flag;
  std::vector<QueryMetrics> per_query;  ///< ordered by query id
  /// "P@<k>" and "AP" -> mean over queries.
  std::map<std::string, double> macro;
  std::size_t num_queries = 0;
};

struct ExperimentOptions {
  std::vector<std::size_t> k_list{3, 5, 10};
  RetrievalOptions retrieval;
  /// Truncate the ranking before computing AP; full list when unset.
  std::optional<std::size_t> ap_depth;
  /// 0 = default_thread_count()
  unsigned threads = 0;
};

/// Every test volume queries the train indexes; each ranking covers all
/// train volumes and is judged against the manifest labels.
MetricReport run_experiment(const DatasetManifest& manifest, const IndexSet& indexes, MethodSpec method,
                            RelevanceCriterion criterion, const ExperimentOptions& options = {});

/// Builds the needed train indexes first.
MetricReport run_experiment(const DatasetManifest& manifest, MethodSpec method,
                            RelevanceCriterion criterion, const ExperimentOptions& options = {});

/// Loads the query inputs a method needs for one manifest entry.
QueryInput load_query_input(const DatasetManifest& manifest, const VolumeEntry& entry, MethodSpec method);

}  // namespace mir3d
