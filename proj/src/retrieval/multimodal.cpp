#include "mir3d/retrieval/multimodal.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

#include <json.hpp>

#include "mir3d/core/error.hpp"
#include "mir3d/retrieval/slice_retrieval.hpp"

namespace mir3d {

std::string generate_caption(std::string_view organ, int num_lesions,
                             std::optional<double> largest_length_cm) {
  if (num_lesions < 0) throw ValidationError("generate_caption: negative lesion count");
  if (num_lesions == 0)
    return "A normal image of the " + std::string(organ) + " with no tumors present.";
  if (!largest_length_cm || !std::isfinite(*largest_length_cm) || *largest_length_cm <= 0)
    throw ValidationError("generate_caption: " + std::to_string(num_lesions) +
                          " lesions but no largest length");
  char length[32];
  std::snprintf(length, sizeof(length), "%.2f", *largest_length_cm);
  return "3D volume image showcasing a " + std::string(organ) + " with " +
         std::to_string(num_lesions) + " tumors, the largest of which measures " + length +
         " centimeters in length";
}

CaptionRecord make_caption_record(std::string volume_id, std::string organ, int num_lesions,
                                  std::optional<double> largest_length_cm) {
  CaptionRecord r;
  r.text = generate_caption(organ, num_lesions, largest_length_cm);
  r.volume_id = std::move(volume_id);
  r.organ = std::move(organ);
  r.num_lesions = num_lesions;
  if (num_lesions > 0) r.largest_length_cm = std::round(*largest_length_cm * 100.0) / 100.0;
  return r;
}

std::string caption_record_line(const CaptionRecord& record) {
  nlohmann::ordered_json j;
  j["volume_id"] = record.volume_id;
  j["organ"] = record.organ;
  j["num_lesions"] = record.num_lesions;
  j["largest_length_cm"] = record.largest_length_cm ? nlohmann::ordered_json(*record.largest_length_cm)
                                                    : nlohmann::ordered_json(nullptr);
  j["text"] = record.text;
  return j.dump() + "\n";
}

CaptionRecord parse_caption_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
    CaptionRecord r;
    r.volume_id = j.at("volume_id").get<std::string>();
    r.organ = j.at("organ").get<std::string>();
    r.num_lesions = j.at("num_lesions").get<int>();
    if (!j.at("largest_length_cm").is_null()) r.largest_length_cm = j["largest_length_cm"].get<double>();
    r.text = j.at("text").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("caption record: ") + e.what());
  }
}

RankedList caption_query(std::span<const float> caption_embedding, const VectorIndex& slice_index,
                         std::size_t n, std::size_t k, std::string_view exclude_volume) {
  if (n == 0 || k == 0) throw ValidationError("caption_query: n and k must be positive");
  RankedList out;
  out.method = "caption";
  if (slice_index.empty()) return out;
  if (caption_embedding.size() != slice_index.dim())
    throw ValidationError("caption embedding dim " + std::to_string(caption_embedding.size()) +
                          " differs from slice index dim " + std::to_string(slice_index.dim()));

  VectorIndex::Filter accept;
  if (!exclude_volume.empty())
    accept = [&](std::size_t e) { return parent_volume(slice_index.key(e)) != exclude_volume; };

  SlicePool pool;
  pool.query_volume_id = std::string(exclude_volume);
  pool.n_per_slice = n;
  pool.num_query_slices = 1;
  for (auto& nb : slice_index.search(caption_embedding, n, accept)) {
    std::string parent(parent_volume(nb.key));
    pool.retrieved.push_back({std::move(nb.key), std::move(parent), nb.distance});
  }
  if (pool.retrieved.empty()) return out;
  out.entries = rank_volumes(score_freq(pool), k).entries;
  return out;
}

RankedList ensemble_interleave(const RankedList& caption_ranked, const RankedList& slice_ranked,
                               const EnsembleConfig& config) {
  const RankedList* lists[2] = {&caption_ranked, &slice_ranked};
  if (config.first == EnsembleFirst::slice_freq) std::swap(lists[0], lists[1]);

  RankedList out;
  out.method = "ensemble";
  std::unordered_set<std::string_view> seen;
  std::size_t cursor[2] = {0, 0};
  std::size_t turn = 0;
  while (out.entries.size() < config.k) {
    const bool exhausted0 = cursor[0] >= lists[0]->entries.size();
    const bool exhausted1 = cursor[1] >= lists[1]->entries.size();
    if (exhausted0 && exhausted1) break;
    const std::size_t which = turn % 2;
    ++turn;
    auto& entries = lists[which]->entries;
    std::size_t& c = cursor[which];
    while (c < entries.size() && seen.contains(entries[c].volume_id)) ++c;
    if (c >= entries.size()) continue;
    seen.insert(entries[c].volume_id);
    out.entries.push_back({entries[c].volume_id, 1.0 / static_cast<double>(out.entries.size() + 1)});
    ++c;
  }
  return out;
}

}  // namespace mir3d
