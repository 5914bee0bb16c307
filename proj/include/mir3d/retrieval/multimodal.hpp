#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mir3d/knn/vector_index.hpp"
#include "mir3d/retrieval/ranked_list.hpp"

namespace mir3d {

struct CaptionRecord {
  std::string volume_id;
  std::string organ;
  int num_lesions = 0;
  std::optional<double> largest_length_cm;
  std::string text;
};

/// Deterministic caption:
///   0 lesions -> "A normal image of the {organ} with no tumors present."
///   otherwise -> "3D volume image showcasing a {organ} with {n} tumors, the
///                 largest of which measures {L:.2f} centimeters in length"
/// Throws ValidationError when lesions are present but the length is not.
std::string generate_caption(std::string_view organ, int num_lesions,
                             std::optional<double> largest_length_cm);

CaptionRecord make_caption_record(std::string volume_id, std::string organ, int num_lesions,
                                  std::optional<double> largest_length_cm);

/// One JSON object per line with fields volume_id, organ, num_lesions,
/// largest_length_cm (null when absent) and text.
std::string caption_record_line(const CaptionRecord& record);
CaptionRecord parse_caption_record(std::string_view line);

/// Retrieves the top-n slices for one text embedding and ranks parent
/// volumes by frequency. Slices of `exclude_volume` are skipped.
RankedList caption_query(std::span<const float> caption_embedding, const VectorIndex& slice_index,
                         std::size_t n, std::size_t k, std::string_view exclude_volume = {});

enum class EnsembleFirst { caption, slice_freq };

struct EnsembleConfig {
  EnsembleFirst first = EnsembleFirst::caption;
  std::size_t k = 10;
};

/// Alternates between the two lists, starting with `config.first`, each turn
/// taking that list's next volume not yet emitted. Stops at k entries or
/// when both lists are exhausted. Scores are 1/rank.
RankedList ensemble_interleave(const RankedList& caption_ranked, const RankedList& slice_ranked,
                               const EnsembleConfig& config);

}  // namespace mir3d
