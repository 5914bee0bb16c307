#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"
#include "mir3d/knn/vector_index.hpp"
#include "mir3d/util/parallel.hpp"
#include "test_util.hpp"

namespace mir3d {
namespace {

using testing::TempDir;
using Items = std::vector<std::pair<std::string, std::vector<float>>>;

// Full sort of every distance; the reference for exact search.
std::vector<std::pair<double, std::string>> brute_force(const Items& items, const std::vector<float>& q,
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
  all.resize(std::min(k, all.size()));
  return all;
}

Items toy_items() {
  return {{"A", {0, 0}}, {"B", {1, 0}}, {"C", {5, 5}}};
}

TEST(Distance, Examples) {
  const std::vector<float> o{0, 0}, p{3, 4};
  EXPECT_DOUBLE_EQ(euclidean_distance(o, p), 5.0);
  EXPECT_DOUBLE_EQ(euclidean_distance(p, p), 0.0);
  const std::vector<float> a{1, 1, 1}, b{2, 3, 4};
  EXPECT_NEAR(euclidean_distance(a, b), 3.741657, 1e-6);
  EXPECT_DOUBLE_EQ(euclidean_distance(a, b), std::sqrt(14.0));
}

TEST(Distance, DimensionMismatch) {
  const std::vector<float> a{1, 2}, b{1, 2, 3};
  EXPECT_THROW(euclidean_distance(a, b), ValidationError);
}

TEST(Distance, MetricProperties) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    const std::size_t dim = 1 + rng() % 64;
    const auto a = testing::random_vector(rng, dim), b = testing::random_vector(rng, dim),
               c = testing::random_vector(rng, dim);
    const double ab = euclidean_distance(a, b), ba = euclidean_distance(b, a);
    EXPECT_EQ(ab, ba);
    EXPECT_EQ(euclidean_distance(a, a), 0.0);
    const double bc = euclidean_distance(b, c), ac = euclidean_distance(a, c);
    EXPECT_LE(ac, (ab + bc) * (1.0 + 1e-9));
  }
}

TEST(BuildIndex, Basics) {
  const auto idx = build_index(toy_items(), 2);
  EXPECT_EQ(idx.size(), 3u);
  EXPECT_EQ(idx.kind(), "slice");
  Items dup = toy_items();
  dup.push_back({"B", {2, 2}});
  try {
    build_index(dup, 2);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
  }
  EXPECT_THROW(build_index({{"A", {1, 2, 3}}}, 2), ValidationError);
}

TEST(BuildIndex, EmptyIndexSearchesEmpty) {
  const auto idx = build_index({}, 3);
  EXPECT_TRUE(idx.empty());
  const std::vector<float> q{1, 2, 3};
  EXPECT_TRUE(idx.search(q, 5).empty());
}

TEST(Search, Examples) {
  const auto idx = build_index(toy_items(), 2);
  const std::vector<float> q{0.4f, 0.0f};
  const auto res = idx.search(q, 2);
  ASSERT_EQ(res.size(), 2u);
  const auto oracle = brute_force(toy_items(), q, 2);
  EXPECT_EQ(res[0].key, "A");
  EXPECT_EQ(res[1].key, "B");
  EXPECT_DOUBLE_EQ(res[0].distance, oracle[0].first);
  EXPECT_DOUBLE_EQ(res[1].distance, oracle[1].first);
  EXPECT_NEAR(res[0].distance, 0.4, 1e-6);
  EXPECT_NEAR(res[1].distance, 0.6, 1e-6);

  const std::vector<float> exact{1, 0};
  const auto one = idx.search(exact, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].key, "B");
  EXPECT_EQ(one[0].distance, 0.0);

  EXPECT_EQ(idx.search(q, 10).size(), 3u);
}

TEST(Search, TiesBrokenByKey) {
  const auto idx = build_index({{"z", {1, 0}}, {"a", {-1, 0}}, {"m", {0, 1}}}, 2);
  const std::vector<float> q{0, 0};
  const auto res = idx.search(q, 3);
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(res[0].key, "a");
  EXPECT_EQ(res[1].key, "m");
  EXPECT_EQ(res[2].key, "z");
}

TEST(Search, Errors) {
  const auto idx = build_index(toy_items(), 2);
  const std::vector<float> q{0, 0}, bad{0, 0, 0};
  EXPECT_THROW(idx.search(q, 0), ValidationError);
  EXPECT_THROW(idx.search(bad, 1), ValidationError);
}

TEST(Search, FilterRestrictsCandidates) {
  const auto idx = build_index(toy_items(), 2);
  const std::vector<float> q{0, 0};
  const auto res = idx.search(q, 3, [&](std::size_t e) { return idx.key(e) != "A"; });
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0].key, "B");
  EXPECT_EQ(res[1].key, "C");
}

TEST(Search, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint32_t dim = 1 + rng() % 16;
    const std::size_t n = 1 + rng() % 300;
    std::uniform_int_distribution<int> coarse(-2, 2);
    Items items;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<float> v(dim);
      for (auto& x : v) x = static_cast<float>(coarse(rng));  // many exact ties
      items.push_back({"k" + std::to_string(rng() % 100000) + "_" + std::to_string(i), v});
    }
    const auto idx = build_index(items, dim);
    std::vector<float> q(dim);
    for (auto& x : q) x = static_cast<float>(coarse(rng));
    const std::size_t k = 1 + rng() % (n + 5);
    const auto got = idx.search(q, k);
    const auto want = brute_force(items, q, k);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].key, want[i].second);
      EXPECT_EQ(got[i].distance, want[i].first);
      EXPECT_EQ(idx.key(got[i].entry), got[i].key);
    }
  }
}

TEST(Search, ConcurrentQueriesMatchSerial) {
  std::mt19937_64 rng(21);
  Items items;
  for (int i = 0; i < 400; ++i) items.push_back({"k" + std::to_string(i), testing::random_vector(rng, 12)});
  const auto idx = build_index(items, 12);
  std::vector<std::vector<float>> queries;
  for (int i = 0; i < 64; ++i) queries.push_back(testing::random_vector(rng, 12));
  std::vector<std::vector<Neighbor>> serial(queries.size()), parallel(queries.size());
  parallel_for(queries.size(), 1, [&](std::size_t i) { serial[i] = idx.search(queries[i], 15); });
  parallel_for(queries.size(), 8, [&](std::size_t i) { parallel[i] = idx.search(queries[i], 15); });
  EXPECT_EQ(serial, parallel);
}

TEST(Persistence, RoundTripAndByteIdentical) {
  TempDir dir;
  std::mt19937_64 rng(5);
  Items items;
  for (int i = 0; i < 50; ++i) items.push_back({"vol_" + std::to_string(i) + "#3", testing::random_vector(rng, 8)});
  const auto idx = build_index(items, 8, "volume-average");
  save_index(idx, dir / "volume-average");
  const auto back = load_index(dir / "volume-average");
  EXPECT_EQ(back, idx);
  EXPECT_EQ(back.kind(), "volume-average");
  save_index(back, dir / "copy");
  EXPECT_EQ(read_binary_file(dir / "copy.emb"), read_binary_file(dir / "volume-average.emb"));
  EXPECT_EQ(read_text_file(dir / "copy.meta"), read_text_file(dir / "volume-average.meta"));
  const auto meta = read_text_file(dir / "copy.meta");
  EXPECT_EQ(std::count(meta.begin(), meta.end(), '\n'), 1);
}

TEST(Persistence, CorruptMetaRejected) {
  TempDir dir;
  const auto idx = build_index(toy_items(), 2);
  save_index(idx, dir / "i");
  write_file_atomic(dir / "i.meta", R"({"kind":"slice","dim":2,"count":2,"keys":["A","B"]})");
  EXPECT_THROW(load_index(dir / "i"), FormatError);
  EXPECT_THROW(load_index(dir / "missing"), IoError);
}

}  // namespace
}  // namespace mir3d
