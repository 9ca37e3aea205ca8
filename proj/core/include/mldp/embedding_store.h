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

#ifndef MLDP_EMBEDDING_STORE_H_
#define MLDP_EMBEDDING_STORE_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mldp {

// Dense index of a vocabulary entry; ids are contiguous in [0, size()) and
// follow the line order of the source file.
using WordId = int32_t;

struct NeighborResult {
  WordId id = 0;
  double distance = 0.0;  // Euclidean
};

// Geometric statistics of a loaded vocabulary, consumed by the noise
// calibrations: the trace-normalized covariance with its regularized
// Cholesky factor, the vocabulary diameter and the minimum pairwise
// distance.
struct GeometryStats {
  Eigen::MatrixXd sigma;  // symmetric PSD, trace(sigma) == dim
  double lambda = 1.0;
  Eigen::MatrixXd chol;  // lower triangular, chol*chol^T = lambda*sigma+(1-lambda)*I
  double delta_max = 0.0;
  // Set when delta_max comes from the two-sweep farthest-point pass instead
  // of the exact all-pairs scan; the value is then a certified lower bound.
  bool delta_max_is_lower_bound = false;
  double delta_min = 0.0;
};

// Immutable word-embedding table with exact brute-force nearest-neighbor
// queries. All queries are const and safe to call concurrently.
//
// Vectors are stored in 32-bit floats; every distance accumulates in 64-bit
// doubles. Ties in nearest-neighbor scans resolve to the smallest WordId so
// seeded runs stay deterministic.
class EmbeddingStore {
 public:
  using Matrix =
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  // Parses whitespace-separated text, one record per line: a token followed
  // by `dim` reals. Tokens may contain any non-whitespace bytes. Rejects
  // empty files, ragged dimensions, non-numeric fields and duplicate tokens.
  static EmbeddingStore Load(const std::string& path,
                             std::optional<int> expected_dim = std::nullopt);

  EmbeddingStore(std::vector<std::string> words, Matrix vectors);

  int dim() const { return static_cast<int>(vectors_.cols()); }
  WordId size() const { return static_cast<WordId>(words_.size()); }
  const std::string& word(WordId id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<WordId> Find(std::string_view token) const;
  bool Contains(std::string_view token) const { return Find(token).has_value(); }

  Eigen::VectorXd Embedding(WordId id) const;

  double Distance(WordId id, const Eigen::VectorXd& query) const;
  double PairDistance(WordId a, WordId b) const;

  // Id minimizing the Euclidean distance to `query` among non-excluded
  // words. Throws if the exclusion covers the whole vocabulary or the query
  // dimension does not match.
  NeighborResult NearestNeighbor(const Eigen::VectorXd& query,
                                 std::span<const WordId> exclude = {}) const;

  // The min(k, size() - |exclude|) nearest words in ascending distance.
  std::vector<NeighborResult> KNearest(const Eigen::VectorXd& query, size_t k,
                                       std::span<const WordId> exclude = {}) const;

  // All words within `radius` of `query` (inclusive), ascending id order.
  std::vector<NeighborResult> WithinRadius(const Eigen::VectorXd& query,
                                           double radius) const;

 private:
  void CheckQuery(const Eigen::VectorXd& query) const;

  std::vector<std::string> words_;
  Matrix vectors_;
  std::unordered_map<std::string_view, WordId> index_;  // views into words_
};

// Computes covariance, Cholesky factor and distance extremes. The diameter
// is exact (all pairs) when size() <= exact_threshold and otherwise the
// two-sweep farthest-point estimate flagged as a lower bound. delta_min is
// always exact. Throws when all rows are identical (delta_min would be 0).
GeometryStats ComputeGeometryStats(const EmbeddingStore& store, double lambda,
                                   size_t exact_threshold = 20000);

}  // namespace mldp

#endif  // MLDP_EMBEDDING_STORE_H_
