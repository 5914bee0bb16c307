#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "mir3d/core/types.hpp"
#include "mir3d/retrieval/ranked_list.hpp"

namespace mir3d {

enum class RelevanceCriterion { flag, group };
std::string_view to_string(RelevanceCriterion c);
RelevanceCriterion parse_criterion(std::string_view name);

/// flag: equal lesion flags; group: equal lesion groups. Throws
/// ValidationError under `group` when either entry lacks a group label.
bool is_relevant(const VolumeEntry& query, const VolumeEntry& result, RelevanceCriterion c);

/// Relevance judgements in rank order, 1 = relevant.
using RelevancePattern = std::span<const std::uint8_t>;
using RelevancePredicate = std::function<bool(const std::string& volume_id)>;

/// Relevant among the first min(k, n) results, divided by k. Short lists are
/// not renormalized.
double precision_at_k(RelevancePattern relevance, std::size_t k);
double precision_at_k(const RankedList& ranked, const RelevancePredicate& is_relevant, std::size_t k);

/// Sum over ranks n of (R_n - R_{n-1}) * P_n with R_0 = 0, where recall uses
/// `total_relevant` as denominator.
double average_precision(RelevancePattern relevance, std::size_t total_relevant);
double average_precision(const RankedList& ranked, const RelevancePredicate& is_relevant,
                         std::size_t total_relevant);

}  // namespace mir3d
