#include "mir3d/eval/report_io.hpp"

#include <algorithm>
#include <vector>

#include <json.hpp>

namespace mir3d {

std::string report_csv(const MetricReport& report) {
  std::string out = "method,criterion,k,value\n";
  const std::string prefix = report.method + "," + std::string(to_string(report.criterion)) + ",";
  std::vector<std::pair<std::size_t, double>> p_rows;
  for (const auto& [name, value] : report.macro)
    if (name.starts_with("P@")) p_rows.emplace_back(std::stoul(name.substr(2)), value);
  std::sort(p_rows.begin(), p_rows.end());
  for (const auto& [k, value] : p_rows) out += prefix + std::to_string(k) + "," + format_real(value) + "\n";
  if (auto it = report.macro.find("AP"); it != report.macro.end())
    out += prefix + "AP," + format_real(it->second) + "\n";
  return out;
}

std::string report_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.method;
  j["criterion"] = to_string(report.criterion);
  j["num_queries"] = report.num_queries;
  j["macro"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.macro) j["macro"][name] = value;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& q : report.per_query) {
    nlohmann::ordered_json r;
    r["query_id"] = q.query_id;
    r["p_at"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : q.p_at) r["p_at"][std::to_string(k)] = v;
    r["ap"] = q.ap ? nlohmann::ordered_json(*q.ap) : nlohmann::ordered_json(nullptr);
    rows.push_back(std::move(r));
  }
  j["per_query"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string summary_csv(std::span<const MetricReport> reports, std::span<const std::size_t> k_list) {
  std::string out = "method";
  for (auto k : k_list) out += ",P@" + std::to_string(k);
  out += ",AP\n";
  for (const auto& r : reports) {
    out += r.method;
    for (auto k : k_list) {
      auto it = r.macro.find("P@" + std::to_string(k));
      out += "," + (it == r.macro.end() ? std::string() : format_real(it->second));
    }
    auto ap = r.macro.find("AP");
    out += "," + (ap == r.macro.end() ? std::string() : format_real(ap->second)) + "\n";
  }
  return out;
}

}  // namespace mir3d
