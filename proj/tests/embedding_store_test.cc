// Copyright 2025 The MLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mldp/embedding_store.h"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "mldp/rng.h"
#include "testing/fixtures.h"

namespace mldp {
namespace {

namespace fs = std::filesystem;

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("mldp_store_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".txt");
    std::ofstream out(path_, std::ios::binary);
    out << contents;
  }
  ~TempFile() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  std::string path() const { return path_.string(); }

 private:
  fs::path path_;
};

TEST(Load, ParsesSmallFile) {
  TempFile file("a 1 0\nb 0 1\nc 1 1\n");
  const EmbeddingStore store = EmbeddingStore::Load(file.path());
  EXPECT_EQ(store.size(), 3);
  EXPECT_EQ(store.dim(), 2);
  EXPECT_EQ(store.word(0), "a");
  EXPECT_EQ(store.Find("c"), WordId{2});
  EXPECT_FALSE(store.Find("zzqx").has_value());
  EXPECT_EQ(store.Embedding(2)[0], 1.0);
}

TEST(Load, RejectsDimensionMismatch) {
  TempFile file("a 1 0\nb 0 1 1\n");
  EXPECT_THROW(EmbeddingStore::Load(file.path()), std::runtime_error);
}

TEST(Load, RejectsNonNumericField) {
  TempFile file("a 1 zebra\n");
  EXPECT_THROW(EmbeddingStore::Load(file.path()), std::runtime_error);
}

TEST(Load, RejectsEmptyFile) {
  TempFile file("");
  EXPECT_THROW(EmbeddingStore::Load(file.path()), std::runtime_error);
}

TEST(Load, RejectsDuplicateToken) {
  TempFile file("a 1 0\na 0 1\n");
  EXPECT_THROW(EmbeddingStore::Load(file.path()), std::invalid_argument);
}

TEST(Load, RespectsExpectedDim) {
  TempFile file("a 1 0\nb 0 1\n");
  EXPECT_NO_THROW(EmbeddingStore::Load(file.path(), 2));
  EXPECT_THROW(EmbeddingStore::Load(file.path(), 3), std::runtime_error);
}

TEST(Load, AcceptsArbitraryNonWhitespaceTokens) {
  TempFile file("<unk> 1 0\n\xc3\xa9t\xc3\xa9 0 1\n::punct,, 2 2\n");
  const EmbeddingStore store = EmbeddingStore::Load(file.path());
  EXPECT_EQ(store.size(), 3);
  EXPECT_TRUE(store.Find("::punct,,").has_value());
  EXPECT_TRUE(store.Find("\xc3\xa9t\xc3\xa9").has_value());
}

TEST(NearestNeighbor, ExactMatchHasZeroDistance) {
  const EmbeddingStore store = testing::Toy2d();
  const NeighborResult hit = store.NearestNeighbor(store.Embedding(1));
  EXPECT_EQ(hit.id, 1);
  EXPECT_DOUBLE_EQ(hit.distance, 0.0);
}

TEST(NearestNeighbor, PicksClosestWord) {
  const EmbeddingStore store = testing::Toy2d();
  Eigen::VectorXd query(2);
  query << 0.9, 0.9;
  EXPECT_EQ(store.word(store.NearestNeighbor(query).id), "c");
}

TEST(NearestNeighbor, TieBreaksToSmallestId) {
  const EmbeddingStore store = testing::Toy2d();
  Eigen::VectorXd query(2);
  query << 0.9, 0.9;
  // With c excluded, a and b are equidistant: sqrt(0.01 + 0.81) both.
  const std::vector<WordId> exclude = {2};
  const NeighborResult hit = store.NearestNeighbor(query, exclude);
  EXPECT_EQ(store.word(hit.id), "a");
}

TEST(NearestNeighbor, RejectsFullExclusionAndBadDim) {
  const EmbeddingStore store = testing::Toy2d();
  const std::vector<WordId> all = {0, 1, 2};
  EXPECT_THROW(store.NearestNeighbor(store.Embedding(0), all),
               std::invalid_argument);
  Eigen::VectorXd bad(3);
  bad << 1, 2, 3;
  EXPECT_THROW(store.NearestNeighbor(bad), std::invalid_argument);
}

TEST(NearestNeighbor, MatchesBruteForceOnRandomVocabulary) {
  const EmbeddingStore store = testing::SyntheticGloveStore(500, 8, 42);
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd query(8);
    for (int j = 0; j < 8; ++j) query[j] = 3.0 * rng.Gaussian();
    // Independent O(|W|) scan.
    WordId best = -1;
    double best_distance = 1e300;
    for (WordId id = 0; id < store.size(); ++id) {
      const double distance = (store.Embedding(id) - query).norm();
      if (distance < best_distance) {
        best_distance = distance;
        best = id;
      }
    }
    const NeighborResult hit = store.NearestNeighbor(query);
    ASSERT_EQ(hit.id, best);
    ASSERT_NEAR(hit.distance, best_distance, 1e-9);
  }
}

TEST(KNearest, OrderedAndConsistentWithNearestNeighbor) {
  const EmbeddingStore store = testing::SyntheticGloveStore(300, 6, 9);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd query(6);
    for (int j = 0; j < 6; ++j) query[j] = 2.0 * rng.Gaussian();
    const auto top = store.KNearest(query, 10);
    ASSERT_EQ(top.size(), 10u);
    for (size_t i = 1; i < top.size(); ++i) {
      ASSERT_LE(top[i - 1].distance, top[i].distance);
    }
    const NeighborResult nn = store.NearestNeighbor(query);
    ASSERT_EQ(top[0].id, nn.id);
    const auto single = store.KNearest(query, 1);
    ASSERT_EQ(single[0].id, nn.id);
  }
}

TEST(KNearest, FirstElementOfSelfQueryIsSelf) {
  const EmbeddingStore store = testing::Toy2d();
  const auto top = store.KNearest(store.Embedding(0), 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].id, 0);
  // From a=(1,0): c=(1,1) at distance 1, then b=(0,1) at sqrt(2).
  EXPECT_EQ(store.word(top[1].id), "c");
  EXPECT_EQ(store.word(top[2].id), "b");
}

TEST(KNearest, ClampsToAvailableWords) {
  const EmbeddingStore store = testing::Toy2d();
  const std::vector<WordId> exclude = {1};
  const auto top = store.KNearest(store.Embedding(0), 99, exclude);
  EXPECT_EQ(top.size(), 2u);
}

TEST(Geometry, ToyDistanceExtremes) {
  const EmbeddingStore store = testing::Toy2d();
  const GeometryStats stats = ComputeGeometryStats(store, 0.5);
  EXPECT_NEAR(stats.delta_max, std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(stats.delta_max_is_lower_bound);
  EXPECT_NEAR(stats.delta_min, 1.0, 1e-12);
}

TEST(Geometry, DuplicateRowsAreDegenerate) {
  const EmbeddingStore store =
      testing::MakeStore({"a", "b", "c"}, {{1, 0}, {1, 0}, {0, 1}});
  EXPECT_THROW(ComputeGeometryStats(store, 0.5), std::runtime_error);
}

TEST(Geometry, TraceOfSigmaEqualsDim) {
  const EmbeddingStore store = testing::SyntheticGloveStore(200, 12, 5);
  const GeometryStats stats = ComputeGeometryStats(store, 0.2);
  EXPECT_NEAR(stats.sigma.trace(), 12.0, 1e-9 * 12.0);
  EXPECT_LT((stats.sigma - stats.sigma.transpose()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Geometry, CholeskyReconstructsRegularizedMatrix) {
  const EmbeddingStore store = testing::SyntheticGloveStore(200, 10, 8);
  for (const double lambda : {0.0, 0.2, 1.0}) {
    const GeometryStats stats = ComputeGeometryStats(store, lambda);
    const Eigen::MatrixXd expected =
        lambda * stats.sigma +
        (1.0 - lambda) * Eigen::MatrixXd::Identity(10, 10);
    const Eigen::MatrixXd actual = stats.chol * stats.chol.transpose();
    EXPECT_LT((actual - expected).norm() / expected.norm(), 1e-8);
  }
}

TEST(Geometry, IdentityCovarianceGivesIdentityFactor) {
  // Four points whose sample covariance is isotropic; after trace
  // normalization sigma == I, so at lambda = 1 the factor is I.
  const EmbeddingStore store = testing::MakeStore(
      {"a", "b", "c", "d"}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const GeometryStats stats = ComputeGeometryStats(store, 1.0);
  EXPECT_LT((stats.sigma - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((stats.chol - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-8);
}

TEST(Geometry, FarthestPointEstimateIsLowerBound) {
  const EmbeddingStore store = testing::SyntheticGloveStore(400, 6, 77);
  const GeometryStats exact = ComputeGeometryStats(store, 0.5, 100000);
  const GeometryStats estimated = ComputeGeometryStats(store, 0.5, 10);
  EXPECT_TRUE(estimated.delta_max_is_lower_bound);
  EXPECT_LE(estimated.delta_max, exact.delta_max + 1e-12);
  EXPECT_GT(estimated.delta_max, 0.0);
  // delta_min stays exact on both paths.
  EXPECT_NEAR(estimated.delta_min, exact.delta_min, 1e-12);
}

TEST(Geometry, NeedsTwoWords) {
  const EmbeddingStore store = testing::MakeStore({"a"}, {{1, 2}});
  EXPECT_THROW(ComputeGeometryStats(store, 0.5), std::invalid_argument);
}

}  // namespace
}  // namespace mldp
