#include "mir3d/lesion/grouping.hpp"

#include <algorithm>
#include <vector>

namespace mir3d {

LesionGroup classify_lesion_group(std::span<const double> lengths_cm) {
  if (lengths_cm.empty()) return LesionGroup::G0;
  const double largest = *std::max_element(lengths_cm.begin(), lengths_cm.end());
  if (lengths_cm.size() == 1 && largest < kGroup1MaxCm) return LesionGroup::G1;
  if (largest > kGroup3MinCm) return LesionGroup::G3;
  return LesionGroup::G2;
}

LesionGroup classify_lesion_group(std::span<const LesionRecord> lesions) {
  std::vector<double> lengths;
  lengths.reserve(lesions.size());
  for (const auto& l : lesions) lengths.push_back(l.length_cm);
  return classify_lesion_group(lengths);
}

}  // namespace mir3d
