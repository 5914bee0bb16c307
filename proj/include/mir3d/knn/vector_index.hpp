#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace mir3d {

/// sqrt(sum (a_i - b_i)^2), accumulated in double.
double euclidean_distance(std::span<const float> a, std::span<const float> b);

struct Neighbor {
  std::string key;
  double distance = 0.0;
  std::size_t entry = 0;  ///< position of the key in the index

  bool operator==(const Neighbor&) const = default;
};

/// Strict weak order used for every neighbor list: distance, then key.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.key < b.key;
}

/// Frozen exact Euclidean index. Immutable once built; concurrent searches
/// are safe.
class VectorIndex {
 public:
  using Filter = std::function<bool(std::size_t entry)>;

  VectorIndex() = default;

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  /// "slice" or "volume-<pooling>"
  const std::string& kind() const { return kind_; }
  const std::string& key(std::size_t entry) const { return keys_[entry]; }
  const std::vector<std::string>& keys() const { return keys_; }
  std::span<const float> vector(std::size_t entry) const {
    return {values_.data() + entry * dim_, dim_};
  }

  /// Top min(k, |accepted entries|) neighbors ordered by (distance, key).
  /// `accept`, when set, restricts the scan to entries it returns true for.
  std::vector<Neighbor> search(std::span<const float> query, std::size_t k,
                               const Filter& accept = {}) const;

  bool operator==(const VectorIndex& o) const {
    return dim_ == o.dim_ && kind_ == o.kind_ && keys_ == o.keys_ && values_ == o.values_;
  }

 private:
  friend class VectorIndexBuilder;
  std::uint32_t dim_ = 0;
  std::string kind_;
  std::vector<std::string> keys_;
  std::vector<float> values_;
};

/// Single-writer accumulation phase; `freeze()` yields the searchable index.
class VectorIndexBuilder {
 public:
  explicit VectorIndexBuilder(std::uint32_t dim, std::string kind = "slice");

  /// Throws ValidationError on duplicate key, wrong length or non-finite data.
  void add(std::string key, std::span<const float> vector);
  void reserve(std::size_t n);
  VectorIndex freeze() &&;

 private:
  VectorIndex index_;
  std::unordered_set<std::string> seen_;
};

VectorIndex build_index(const std::vector<std::pair<std::string, std::vector<float>>>& items,
                        std::uint32_t dim, std::string kind = "slice");

// Persistence: `<base>.emb` holds the vectors as EMB1 rows (slice_index =
// entry ordinal) and `<base>.meta` is a single JSON line
// {"kind":...,"dim":...,"count":...,"keys":[...]}.
void save_index(const VectorIndex& index, const std::filesystem::path& base);
VectorIndex load_index(const std::filesystem::path& base);
std::string index_meta_line(const VectorIndex& index);

}  // namespace mir3d
