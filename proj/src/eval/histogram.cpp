#include "mir3d/eval/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mir3d/core/error.hpp"
#include "mir3d/retrieval/ranked_list.hpp"

namespace mir3d {

LesionHistogram lesion_size_histogram(std::span<const LesionRecord> records, double bin_width_cm) {
  if (!(bin_width_cm > 0)) throw ValidationError("bin width must be positive");
  std::map<std::pair<std::string, std::string>, double> largest;  // (organ, volume) -> cm
  for (const auto& r : records) {
    auto [it, inserted] = largest.try_emplace({r.organ, r.volume_id}, r.length_cm);
    if (!inserted) it->second = std::max(it->second, r.length_cm);
  }
  LesionHistogram h;
  h.bin_width_cm = bin_width_cm;
  for (const auto& [key, length] : largest)
    ++h.bins[key.first][static_cast<std::int64_t>(std::floor(length / bin_width_cm))];
  return h;
}

std::string histogram_csv(const LesionHistogram& histogram) {
  std::string out = "organ,bin_low_cm,bin_high_cm,count\n";
  for (const auto& [organ, bins] : histogram.bins)
    for (const auto& [bin, count] : bins)
      out += organ + "," + format_real(static_cast<double>(bin) * histogram.bin_width_cm) + "," +
             format_real(static_cast<double>(bin + 1) * histogram.bin_width_cm) + "," + std::to_string(count) + "\n";
  return out;
}

}  // namespace mir3d
