#include "mir3d/retrieval/ranked_list.hpp"

#include <charconv>

#include <json.hpp>

namespace mir3d {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string ranked_list_csv(const RankedList& list, bool header) {
  std::string out;
  if (header) out += "rank,volume_id,score,method\n";
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += list.entries[i].volume_id;
    out += ',';
    out += format_real(list.entries[i].score);
    out += ',';
    out += list.method;
    out += '\n';
  }
  return out;
}

std::string ranked_list_jsonl(const RankedList& list) {
  std::string out;
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    nlohmann::ordered_json rec;
    rec["rank"] = i + 1;
    rec["volume_id"] = list.entries[i].volume_id;
    rec["score"] = list.entries[i].score;
    rec["method"] = list.method;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace mir3d
