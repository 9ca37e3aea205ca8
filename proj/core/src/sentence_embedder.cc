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

#include "mldp/sentence_embedder.h"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace mldp {

Eigen::VectorXd MeanWordVectorEmbedder::Embed(
    size_t /*doc_index*/, std::span<const std::string> tokens) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(store_.dim());
  size_t hits = 0;
  for (const std::string& token : tokens) {
    if (const auto id = store_.Find(token)) {
      sum += store_.Embedding(*id);
      ++hits;
    }
  }
  if (hits == 0) return sum;  // zero vector
  const double norm = sum.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(store_.dim());
  return sum / norm;
}

PrecomputedSentenceEmbedder PrecomputedSentenceEmbedder::Load(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open sentence vector file: " + path);
  }
  PrecomputedSentenceEmbedder embedder;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("sentence vector file line " +
                               std::to_string(line_no) + ": missing TAB");
    }
    size_t doc_index = 0;
    {
      const auto [ptr, ec] =
          std::from_chars(line.data(), line.data() + tab, doc_index);
      if (ec != std::errc() || ptr != line.data() + tab) {
        throw std::runtime_error("sentence vector file line " +
                                 std::to_string(line_no) + ": bad doc index");
      }
    }
    std::vector<double> values;
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        throw std::runtime_error("sentence vector file line " +
                                 std::to_string(line_no) + ": bad float");
      }
      values.push_back(v);
      p = ptr;
    }
    if (values.empty()) {
      throw std::runtime_error("sentence vector file line " +
                               std::to_string(line_no) + ": empty vector");
    }
    Eigen::VectorXd vec = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    const double norm = vec.norm();
    if (norm > 0.0) vec /= norm;
    embedder.vectors_[doc_index] = std::move(vec);
  }
  return embedder;
}

Eigen::VectorXd PrecomputedSentenceEmbedder::Embed(
    size_t doc_index, std::span<const std::string> /*tokens*/) const {
  const auto it = vectors_.find(doc_index);
  if (it == vectors_.end()) {
    throw std::out_of_range("no precomputed sentence vector for document " +
                            std::to_string(doc_index));
  }
  return it->second;
}

}  // namespace mldp
