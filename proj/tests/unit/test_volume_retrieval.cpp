#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mir3d/core/error.hpp"
#include "mir3d/retrieval/volume_retrieval.hpp"
#include "test_util.hpp"

namespace mir3d {
namespace {

EmbeddingMatrix matrix(const std::string& id, std::uint32_t dim, const std::vector<std::vector<float>>& rows) {
  std::vector<std::uint32_t> idx;
  std::vector<float> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    idx.push_back(static_cast<std::uint32_t>(i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return EmbeddingMatrix(id, dim, idx, values);
}

std::vector<double> pool(const EmbeddingMatrix& m, PoolingMethod p) { return pool_embeddings(m, p).vector; }

TEST(Pooling, Examples) {
  EXPECT_EQ(pool(matrix("v", 2, {{1, 3}, {3, 5}}), PoolingMethod::average), (std::vector<double>{2, 4}));
  EXPECT_EQ(pool(matrix("v", 2, {{1, 3}, {3, 5}, {2, 0}}), PoolingMethod::max), (std::vector<double>{3, 5}));
  EXPECT_EQ(pool(matrix("v", 1, {{0}, {2}}), PoolingMethod::std), (std::vector<double>{1}));
  EXPECT_EQ(pool(matrix("v", 1, {{1}, {2}, {4}, {100}}), PoolingMethod::median), (std::vector<double>{3}));
  EXPECT_EQ(pool(matrix("v", 1, {{5}, {1}, {3}}), PoolingMethod::median), (std::vector<double>{3}));
}

TEST(Pooling, SingleRow) {
  const auto m = matrix("v", 3, {{1.5f, -2, 7}});
  for (auto p : {PoolingMethod::median, PoolingMethod::max, PoolingMethod::average})
    EXPECT_EQ(pool(m, p), (std::vector<double>{1.5, -2, 7}));
  EXPECT_EQ(pool(m, PoolingMethod::std), (std::vector<double>{0, 0, 0}));
}

TEST(Pooling, EmptyMatrixRejected) {
  EXPECT_THROW(pool_embeddings(EmbeddingMatrix("v", 2, {}, {}), PoolingMethod::average), ValidationError);
}

TEST(Pooling, Properties) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t dim = 1 + rng() % 12;
    const std::size_t n = 1 + rng() % 15;
    std::vector<std::vector<float>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(testing::random_vector(rng, dim, -4, 4));
    const auto m = matrix("v", dim, rows);
    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto ms = matrix("v", dim, shuffled);
    for (auto p : kAllPoolings) {
      const auto a = pool(m, p), b = pool(ms, p);
      for (std::uint32_t j = 0; j < dim; ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
    }
    const auto mx = pool(m, PoolingMethod::max), avg = pool(m, PoolingMethod::average);
    for (std::uint32_t j = 0; j < dim; ++j) EXPECT_GE(mx[j], avg[j]);

    // Linearity of the mean, with a power-of-two factor so scaling is exact in f32.
    auto scaled = rows;
    for (auto& r : scaled)
      for (auto& x : r) x *= 4.0f;
    const auto sa = pool(matrix("v", dim, scaled), PoolingMethod::average);
    for (std::uint32_t j = 0; j < dim; ++j) EXPECT_NEAR(sa[j], 4.0 * avg[j], 1e-12);

    std::vector<std::vector<float>> same(n, rows[0]);
    for (double x : pool(matrix("v", dim, same), PoolingMethod::std)) EXPECT_EQ(x, 0.0);
  }
}

TEST(Pooling, NamesRoundTrip) {
  for (auto p : kAllPoolings) EXPECT_EQ(parse_pooling(to_string(p)), p);
  EXPECT_EQ(volume_index_kind(PoolingMethod::average), "volume-average");
  EXPECT_THROW(parse_pooling("mean"), ValidationError);
}

TEST(VolumeIndex, OneEntryPerVolume) {
  std::mt19937_64 rng(2);
  std::vector<EmbeddingMatrix> vols;
  for (int v = 0; v < 10; ++v)
    vols.push_back(matrix("V" + std::to_string(v), 3, {testing::random_vector(rng, 3), testing::random_vector(rng, 3)}));
  const auto idx = build_volume_index(vols, 3, PoolingMethod::median);
  EXPECT_EQ(idx.size(), 10u);
  EXPECT_EQ(idx.kind(), "volume-median");
}

TEST(VolumeIndex, MixedDimsNameTheVolume) {
  std::vector<EmbeddingMatrix> vols{matrix("ok", 2, {{1, 2}}), matrix("bad_one", 3, {{1, 2, 3}})};
  try {
    build_volume_index(vols, 2, PoolingMethod::average);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bad_one"), std::string::npos);
  }
}

TEST(VolumeIndex, IdenticalMatricesKeepDistinctKeys) {
  const auto a = matrix("a", 2, {{1, 2}, {3, 4}});
  const auto b = a.with_volume_id("b");
  const auto idx = build_volume_index({a, b}, 2, PoolingMethod::max);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_NE(idx.key(0), idx.key(1));
  EXPECT_TRUE(std::equal(idx.vector(0).begin(), idx.vector(0).end(), idx.vector(1).begin()));
}

TEST(VolumeSearch, SelfAtRankOne) {
  std::mt19937_64 rng(4);
  std::vector<EmbeddingMatrix> vols;
  for (int v = 0; v < 6; ++v) {
    std::vector<std::vector<float>> rows;
    for (int s = 0; s < 5; ++s) rows.push_back(testing::random_vector(rng, 4));
    vols.push_back(matrix("V" + std::to_string(v), 4, rows));
  }
  for (auto p : kAllPoolings) {
    const auto idx = build_volume_index(vols, 4, p);
    const auto r = volume_search(idx, vols[3].with_volume_id("query"), p, 3);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.entries[0].volume_id, "V3");
    EXPECT_EQ(r.entries[0].score, 1.0);
    EXPECT_EQ(r.method, "volume-" + std::string(to_string(p)));
  }
}

TEST(VolumeSearch, MethodMismatch) {
  const auto idx = build_volume_index({matrix("a", 2, {{1, 2}})}, 2, PoolingMethod::average);
  EXPECT_THROW(volume_search(idx, matrix("q", 2, {{1, 2}}), PoolingMethod::max, 1), ValidationError);
}

TEST(VolumeSearch, ToyIndexMatchesDistanceOracle) {
  // Single-row volumes pool to their own row under average.
  const auto a = matrix("a", 2, {{0, 0}}), b = matrix("b", 2, {{3, 0}}), c = matrix("c", 2, {{0, 2}});
  const auto idx = build_volume_index({a, b, c}, 2, PoolingMethod::average);
  const auto q = matrix("q", 2, {{1, 1}, {1, 0}});  // average (1, 0.5)
  const auto r = volume_search(idx, q, PoolingMethod::average, 3);
  const double da = std::hypot(1.0, 0.5), db = std::hypot(2.0, 0.5), dc = std::hypot(1.0, 1.5);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r.entries[0].volume_id, "a");
  EXPECT_EQ(r.entries[1].volume_id, "c");
  EXPECT_EQ(r.entries[2].volume_id, "b");
  EXPECT_NEAR(r.entries[0].score, 1.0 / (1.0 + da), 1e-7);
  EXPECT_NEAR(r.entries[1].score, 1.0 / (1.0 + dc), 1e-7);
  EXPECT_NEAR(r.entries[2].score, 1.0 / (1.0 + db), 1e-7);
}

}  // namespace
}  // namespace mir3d
