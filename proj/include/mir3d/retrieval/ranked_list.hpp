#pragma once

#include <string>
#include <vector>

namespace mir3d {

struct RankedEntry {
  std::string volume_id;
  double score = 0.0;
  bool operator==(const RankedEntry&) const = default;
};

/// Volumes in rank order (rank 1 first) for one query and method.
struct RankedList {
  std::string method;
  std::vector<RankedEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  bool operator==(const RankedList&) const = default;
};

/// CSV with header `rank,volume_id,score,method`.
std::string ranked_list_csv(const RankedList& list, bool header = true);
/// One JSON object per line: {"rank":..,"volume_id":..,"score":..,"method":..}.
std::string ranked_list_jsonl(const RankedList& list);

/// Shortest decimal that round-trips the double.
std::string format_real(double v);

}  // namespace mir3d
