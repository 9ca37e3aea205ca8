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

#ifndef MLDP_TESTS_TESTING_FIXTURES_H_
#define MLDP_TESTS_TESTING_FIXTURES_H_

#include <string>
#include <vector>

#include "mldp/embedding_store.h"
#include "mldp/rng.h"

namespace mldp::testing {

inline EmbeddingStore MakeStore(const std::vector<std::string>& words,
                                const std::vector<std::vector<double>>& rows) {
  EmbeddingStore::Matrix matrix(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<float>(rows[i][j]);
    }
  }
  return EmbeddingStore(words, std::move(matrix));
}

// The three-word planar vocabulary used across the store and mechanism
// tests: a=(1,0), b=(0,1), c=(1,1).
inline EmbeddingStore Toy2d() {
  return MakeStore({"a", "b", "c"}, {{1, 0}, {0, 1}, {1, 1}});
}

// Clustered Gaussian vocabulary with distance statistics in the same range
// as published 50-d word embeddings (vector norms around 4-5, nearest
// neighbors around 1.5-3, diameter around 12-15). Deterministic in (seed).
inline EmbeddingStore SyntheticGloveStore(int num_words, int dim,
                                          uint64_t seed,
                                          int cluster_size = 20) {
  Rng rng(seed);
  const int num_clusters = (num_words + cluster_size - 1) / cluster_size;
  std::vector<std::vector<double>> centers;
  centers.reserve(num_clusters);
  for (int c = 0; c < num_clusters; ++c) {
    std::vector<double> center(dim);
    for (int j = 0; j < dim; ++j) center[j] = 0.62 * rng.Gaussian();
    centers.push_back(std::move(center));
  }
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  words.reserve(num_words);
  rows.reserve(num_words);
  for (int i = 0; i < num_words; ++i) {
    const auto& center = centers[i / cluster_size];
    std::vector<double> row(dim);
    for (int j = 0; j < dim; ++j) {
      row[j] = center[j] + 0.25 * rng.Gaussian();
    }
    rows.push_back(std::move(row));
    words.push_back("w" + std::to_string(i));
  }
  return MakeStore(words, rows);
}

}  // namespace mldp::testing

#endif  // MLDP_TESTS_TESTING_FIXTURES_H_
