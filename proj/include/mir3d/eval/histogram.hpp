#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "mir3d/lesion/lesion_record.hpp"

namespace mir3d {

struct LesionHistogram {
  double bin_width_cm = 1.0;
  /// organ -> bin index -> count; bin i covers [i*w, (i+1)*w). Only
  /// non-empty bins are present.
  std::map<std::string, std::map<std::int64_t, std::size_t>> bins;
};

/// Largest-lesion size distribution: one sample per (volume, organ), the
/// maximum length_cm among that pair's lesions.
LesionHistogram lesion_size_histogram(std::span<const LesionRecord> records, double bin_width_cm);

/// `organ,bin_low_cm,bin_high_cm,count`
std::string histogram_csv(const LesionHistogram& histogram);

}  // namespace mir3d
