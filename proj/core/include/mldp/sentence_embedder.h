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

#ifndef MLDP_SENTENCE_EMBEDDER_H_
#define MLDP_SENTENCE_EMBEDDER_H_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mldp/embedding_store.h"

namespace mldp {

// Maps a token sequence to a unit-norm sentence vector; returns the zero
// vector when nothing contributes (empty document or no usable token).
// doc_index identifies the document for embedders backed by precomputed
// per-document vectors.
class SentenceEmbedder {
 public:
  virtual ~SentenceEmbedder() = default;
  virtual Eigen::VectorXd Embed(size_t doc_index,
                                std::span<const std::string> tokens) const = 0;
};

// Normalized mean of the in-vocabulary word vectors; the default embedder.
class MeanWordVectorEmbedder final : public SentenceEmbedder {
 public:
  explicit MeanWordVectorEmbedder(const EmbeddingStore& store) : store_(store) {}
  Eigen::VectorXd Embed(size_t doc_index,
                        std::span<const std::string> tokens) const override;

 private:
  const EmbeddingStore& store_;
};

// Sentence vectors computed elsewhere (e.g. by an external transformer
// encoder) and loaded from a file of lines: doc index TAB space-separated
// floats. Vectors are normalized at load.
class PrecomputedSentenceEmbedder final : public SentenceEmbedder {
 public:
  static PrecomputedSentenceEmbedder Load(const std::string& path);

  Eigen::VectorXd Embed(size_t doc_index,
                        std::span<const std::string> tokens) const override;

  size_t size() const { return vectors_.size(); }

 private:
  std::unordered_map<size_t, Eigen::VectorXd> vectors_;
};

}  // namespace mldp

#endif  // MLDP_SENTENCE_EMBEDDER_H_
