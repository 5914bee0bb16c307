#pragma once

// Reference implementations used by the tests. Each one is written the
// slow, obvious way and shares no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mir3d::oracle {

using Items = std::vector<std::pair<std::string, std::vector<float>>>;

/// Every distance computed, full sort by (distance, key), truncated to k.
inline std::vector<std::pair<double, std::string>> knn(const Items& items, const std::vector<float>& q,
                                                       std::size_t k) {
  std::vector<std::pair<double, std::string>> all;
  for (const auto& [key, v] : items) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = static_cast<double>(v[i]) - static_cast<double>(q[i]);
      s += d * d;
    }
    all.emplace_back(std::sqrt(s), key);
  }
  std::sort(all.begin(), all.end());
  if (all.size() > k) all.resize(k);
  return all;
}

/// Partition of the foreground into flood-filled components, each a sorted
/// list of linear indices (x fastest).
inline std::set<std::vector<std::int64_t>> flood_fill(const std::vector<std::uint8_t>& mask, std::int64_t nx,
                                                      std::int64_t ny, std::int64_t nz, int connectivity) {
  std::vector<std::array<int, 3>> offsets;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (manhattan == 0) continue;
        if (connectivity == 6 && manhattan != 1) continue;
        offsets.push_back({dx, dy, dz});
      }
  std::vector<bool> seen(mask.size(), false);
  std::set<std::vector<std::int64_t>> parts;
  for (std::int64_t start = 0; start < static_cast<std::int64_t>(mask.size()); ++start) {
    if (!mask[start] || seen[start]) continue;
    std::vector<std::int64_t> comp;
    std::deque<std::int64_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      comp.push_back(cur);
      const std::int64_t x = cur % nx, y = (cur / nx) % ny, z = cur / (nx * ny);
      for (const auto& o : offsets) {
        const std::int64_t X = x + o[0], Y = y + o[1], Z = z + o[2];
        if (X < 0 || Y < 0 || Z < 0 || X >= nx || Y >= ny || Z >= nz) continue;
        const std::int64_t n = X + nx * (Y + ny * Z);
        if (mask[n] && !seen[n]) {
          seen[n] = true;
          queue.push_back(n);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    parts.insert(std::move(comp));
  }
  return parts;
}

/// Per-volume Freq, MaxScore, ScoreSum straight from their definitions.
struct SliceScores {
  std::map<std::string, double> freq, max_score, score_sum;
};
inline SliceScores slice_scores(const std::vector<std::pair<std::string, double>>& pool) {
  SliceScores s;
  std::map<std::string, std::size_t> count;
  for (const auto& [v, d] : pool) {
    ++count[v];
    const double sim = 1.0 / (1.0 + d);
    auto it = s.max_score.find(v);
    if (it == s.max_score.end() || sim > it->second) s.max_score[v] = sim;
    s.score_sum[v] += sim;
  }
  for (const auto& [v, c] : count) s.freq[v] = static_cast<double>(c) / static_cast<double>(pool.size());
  return s;
}

/// Column-wise reductions computed by sorting each column independently.
inline std::vector<double> column(const std::vector<std::vector<float>>& rows, std::size_t j) {
  std::vector<double> c;
  for (const auto& r : rows) c.push_back(r[j]);
  return c;
}
inline double median(std::vector<double> c) {
  std::sort(c.begin(), c.end());
  const std::size_t n = c.size();
  return n % 2 ? c[n / 2] : (c[n / 2 - 1] + c[n / 2]) / 2.0;
}
inline double mean(const std::vector<double>& c) {
  long double s = 0;
  for (double x : c) s += x;
  return static_cast<double>(s / c.size());
}
inline double max(const std::vector<double>& c) { return *std::max_element(c.begin(), c.end()); }
inline double pop_std(const std::vector<double>& c) {
  const long double m = mean(c);
  long double s = 0;
  for (double x : c) s += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(s / c.size()));
}

/// Threshold form: sum over ranks of (R_n - R_{n-1}) * P_n.
inline double ap_threshold(const std::vector<std::uint8_t>& rel, std::size_t total) {
  double ap = 0, prev_recall = 0;
  std::size_t hits = 0;
  for (std::size_t n = 1; n <= rel.size(); ++n) {
    hits += rel[n - 1];
    const double p = static_cast<double>(hits) / n;
    const double r = static_cast<double>(hits) / total;
    ap += (r - prev_recall) * p;
    prev_recall = r;
  }
  return ap;
}

/// Mean of the precision values at the relevant ranks.
inline double ap_mean_precision(const std::vector<std::uint8_t>& rel) {
  double sum = 0;
  std::size_t hits = 0;
  for (std::size_t n = 1; n <= rel.size(); ++n) {
    if (!rel[n - 1]) continue;
    ++hits;
    sum += static_cast<double>(hits) / n;
  }
  return hits ? sum / hits : 0.0;
}

}  // namespace mir3d::oracle
