#include "mir3d/eval/metrics.hpp"

#include <algorithm>
#include <vector>

#include "mir3d/core/error.hpp"

namespace mir3d {

std::string_view to_string(RelevanceCriterion c) { return c == RelevanceCriterion::flag ? "flag" : "group"; }

RelevanceCriterion parse_criterion(std::string_view name) {
  if (name == "flag") return RelevanceCriterion::flag;
  if (name == "group") return RelevanceCriterion::group;
  throw ValidationError("unknown relevance criterion '" + std::string(name) + "' (expected flag or group)");
}

bool is_relevant(const VolumeEntry& query, const VolumeEntry& result, RelevanceCriterion c) {
  if (c == RelevanceCriterion::flag) return query.lesion_flag == result.lesion_flag;
  for (const auto* e : {&query, &result})
    if (!e->lesion_group) throw ValidationError("volume '" + e->volume_id + "' has no lesion_group label");
  return *query.lesion_group == *result.lesion_group;
}

double precision_at_k(RelevancePattern relevance, std::size_t k) {
  if (k == 0) throw ValidationError("precision_at_k: k must be positive");
  const std::size_t depth = std::min(k, relevance.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += relevance[i] != 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision(RelevancePattern relevance, std::size_t total_relevant) {
  if (total_relevant == 0) throw ValidationError("average_precision: no relevant items (recall undefined)");
  const double total = static_cast<double>(total_relevant);
  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t hits = 0;
  for (std::size_t n = 1; n <= relevance.size(); ++n) {
    hits += relevance[n - 1] != 0;
    const double precision = static_cast<double>(hits) / static_cast<double>(n);
    const double recall = static_cast<double>(hits) / total;
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

namespace {
std::vector<std::uint8_t> judge(const RankedList& ranked, const RelevancePredicate& is_relevant) {
  std::vector<std::uint8_t> rel;
  rel.reserve(ranked.entries.size());
  for (const auto& e : ranked.entries) rel.push_back(is_relevant(e.volume_id) ? 1 : 0);
  return rel;
}
}  // namespace

double precision_at_k(const RankedList& ranked, const RelevancePredicate& is_relevant, std::size_t k) {
  return precision_at_k(judge(ranked, is_relevant), k);
}

double average_precision(const RankedList& ranked, const RelevancePredicate& is_relevant,
                         std::size_t total_relevant) {
  return average_precision(judge(ranked, is_relevant), total_relevant);
}

}  // namespace mir3d
