#pragma once

#include <span>
#include <string>

#include "mir3d/eval/experiment.hpp"

namespace mir3d {

/// `method,criterion,k,value`; one row per P@k (k numeric) and one AP row
/// (k = "AP").
std::string report_csv(const MetricReport& report);

/// Full report including per-query values, as pretty-printed JSON.
std::string report_json(const MetricReport& report);

/// Methods as rows, P@k columns then AP, in the order given.
std::string summary_csv(std::span<const MetricReport> reports, std::span<const std::size_t> k_list);

}  // namespace mir3d
