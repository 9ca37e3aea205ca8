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

#include <Eigen/Cholesky>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace mldp {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits a line into whitespace-separated fields without copying.
std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

float ParseFloat(std::string_view field, size_t line_no) {
  float value = 0.0f;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                             ": non-numeric field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::vector<std::string> words, Matrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (words_.empty()) {
    throw std::invalid_argument("EmbeddingStore: empty vocabulary");
  }
  if (static_cast<Eigen::Index>(words_.size()) != vectors_.rows()) {
    throw std::invalid_argument(
        "EmbeddingStore: word count does not match matrix rows");
  }
  if (vectors_.cols() < 1) {
    throw std::invalid_argument("EmbeddingStore: dimension must be >= 1");
  }
  if (!vectors_.allFinite()) {
    throw std::invalid_argument("EmbeddingStore: non-finite vector entry");
  }
  index_.reserve(words_.size());
  for (size_t i = 0; i < words_.size(); ++i) {
    const bool inserted =
        index_.emplace(std::string_view(words_[i]), static_cast<WordId>(i))
            .second;
    if (!inserted) {
      throw std::invalid_argument("EmbeddingStore: duplicate token '" +
                                  words_[i] + "'");
    }
  }
}

EmbeddingStore EmbeddingStore::Load(const std::string& path,
                                    std::optional<int> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open embedding file: " + path);
  }
  std::vector<std::string> words;
  std::vector<float> values;
  int dim = expected_dim.value_or(0);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw std::runtime_error("embedding file line " +
                               std::to_string(line_no) + ": token without values");
    }
    const int line_dim = static_cast<int>(fields.size()) - 1;
    if (dim == 0) {
      dim = line_dim;
    } else if (line_dim != dim) {
      throw std::runtime_error(
          "embedding file line " + std::to_string(line_no) + ": expected " +
          std::to_string(dim) + " values, found " + std::to_string(line_dim));
    }
    words.emplace_back(fields[0]);
    for (size_t j = 1; j < fields.size(); ++j) {
      values.push_back(ParseFloat(fields[j], line_no));
    }
  }
  if (words.empty()) {
    throw std::runtime_error("embedding file is empty: " + path);
  }
  Matrix matrix = Eigen::Map<const Matrix>(
      values.data(), static_cast<Eigen::Index>(words.size()), dim);
  return EmbeddingStore(std::move(words), std::move(matrix));
}

std::optional<WordId> EmbeddingStore::Find(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::VectorXd EmbeddingStore::Embedding(WordId id) const {
  return vectors_.row(id).cast<double>().transpose();
}

double EmbeddingStore::Distance(WordId id, const Eigen::VectorXd& query) const {
  CheckQuery(query);
  const float* row = vectors_.row(id).data();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
    const double diff = static_cast<double>(row[j]) - query[j];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double EmbeddingStore::PairDistance(WordId a, WordId b) const {
  const float* ra = vectors_.row(a).data();
  const float* rb = vectors_.row(b).data();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
    const double diff = static_cast<double>(ra[j]) - static_cast<double>(rb[j]);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

void EmbeddingStore::CheckQuery(const Eigen::VectorXd& query) const {
  if (query.size() != vectors_.cols()) {
    throw std::invalid_argument(
        "query dimension " + std::to_string(query.size()) +
        " does not match store dimension " + std::to_string(vectors_.cols()));
  }
}

NeighborResult EmbeddingStore::NearestNeighbor(
    const Eigen::VectorXd& query, std::span<const WordId> exclude) const {
  CheckQuery(query);
  const auto excluded = [&](WordId id) {
    return std::find(exclude.begin(), exclude.end(), id) != exclude.end();
  };
  NeighborResult best{-1, std::numeric_limits<double>::infinity()};
  double best_sq = std::numeric_limits<double>::infinity();
  for (WordId id = 0; id < size(); ++id) {
    if (excluded(id)) continue;
    const float* row = vectors_.row(id).data();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
      const double diff = static_cast<double>(row[j]) - query[j];
      sum += diff * diff;
    }
    // Strict < keeps the smallest id on ties because the scan is ascending.
    if (sum < best_sq) {
      best_sq = sum;
      best.id = id;
    }
  }
  if (best.id < 0) {
    throw std::invalid_argument(
        "NearestNeighbor: exclusion covers the entire vocabulary");
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

std::vector<NeighborResult> EmbeddingStore::KNearest(
    const Eigen::VectorXd& query, size_t k,
    std::span<const WordId> exclude) const {
  CheckQuery(query);
  if (k == 0) return {};
  const auto excluded = [&](WordId id) {
    return std::find(exclude.begin(), exclude.end(), id) != exclude.end();
  };
  // Max-heap on (squared distance, id); the worst candidate sits on top.
  struct Entry {
    double sq;
    WordId id;
  };
  const auto worse = [](const Entry& a, const Entry& b) {
    if (a.sq != b.sq) return a.sq < b.sq;
    return a.id < b.id;
  };
  std::vector<Entry> heap;
  heap.reserve(k + 1);
  for (WordId id = 0; id < size(); ++id) {
    if (excluded(id)) continue;
    const float* row = vectors_.row(id).data();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
      const double diff = static_cast<double>(row[j]) - query[j];
      sum += diff * diff;
    }
    if (heap.size() < k) {
      heap.push_back({sum, id});
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (worse({sum, id}, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = {sum, id};
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), worse);
  std::vector<NeighborResult> result;
  result.reserve(heap.size());
  for (const Entry& e : heap) {
    result.push_back({e.id, std::sqrt(e.sq)});
  }
  return result;
}

std::vector<NeighborResult> EmbeddingStore::WithinRadius(
    const Eigen::VectorXd& query, double radius) const {
  CheckQuery(query);
  const double radius_sq = radius * radius;
  std::vector<NeighborResult> result;
  for (WordId id = 0; id < size(); ++id) {
    const float* row = vectors_.row(id).data();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
      const double diff = static_cast<double>(row[j]) - query[j];
      sum += diff * diff;
    }
    if (sum <= radius_sq) result.push_back({id, std::sqrt(sum)});
  }
  return result;
}

GeometryStats ComputeGeometryStats(const EmbeddingStore& store, double lambda,
                                   size_t exact_threshold) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("ComputeGeometryStats: lambda must be in [0,1]");
  }
  const WordId n = store.size();
  const int d = store.dim();
  if (n < 2) {
    throw std::invalid_argument(
        "ComputeGeometryStats: need at least two words");
  }

  GeometryStats stats;
  stats.lambda = lambda;

  // Sample covariance of the rows, rescaled so trace(sigma) == dim (mean
  // eigenvalue one), which keeps lambda*sigma + (1-lambda)*I scale
  // consistent with the identity.
  Eigen::MatrixXd rows(n, d);
  for (WordId i = 0; i < n; ++i) {
    rows.row(i) = store.Embedding(i).transpose();
  }
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - mean;
  Eigen::MatrixXd sigma = centered.transpose() * centered / double(n - 1);
  const double trace = sigma.trace();
  if (trace > 0) {
    sigma *= static_cast<double>(d) / trace;
  }
  stats.sigma = sigma;

  // Distance extremes. delta_min is exact: min over words of the distance
  // to the nearest distinct word.
  double delta_min = std::numeric_limits<double>::infinity();
  if (static_cast<size_t>(n) <= exact_threshold) {
    double max_sq = 0.0;
    double min_sq = std::numeric_limits<double>::infinity();
    for (WordId i = 0; i < n; ++i) {
      for (WordId j = i + 1; j < n; ++j) {
        const double dist = store.PairDistance(i, j);
        const double sq = dist * dist;
        max_sq = std::max(max_sq, sq);
        min_sq = std::min(min_sq, sq);
      }
    }
    stats.delta_max = std::sqrt(max_sq);
    stats.delta_max_is_lower_bound = false;
    delta_min = std::sqrt(min_sq);
  } else {
    // Two farthest-point sweeps give a certified lower bound on the
    // diameter; that is all the Gumbel calibration needs from delta_max.
    WordId anchor = 0;
    double best = -1.0;
    WordId far1 = 0;
    for (WordId i = 0; i < n; ++i) {
      const double dist = store.PairDistance(anchor, i);
      if (dist > best) {
        best = dist;
        far1 = i;
      }
    }
    double best2 = -1.0;
    for (WordId i = 0; i < n; ++i) {
      const double dist = store.PairDistance(far1, i);
      if (dist > best2) best2 = dist;
    }
    stats.delta_max = std::max(best, best2);
    stats.delta_max_is_lower_bound = true;

    for (WordId i = 0; i < n && delta_min > 0; ++i) {
      const NeighborResult nn =
          store.NearestNeighbor(store.Embedding(i), std::array<WordId, 1>{i});
      delta_min = std::min(delta_min, nn.distance);
    }
  }
  stats.delta_min = delta_min;
  if (!(stats.delta_min > 0)) {
    throw std::runtime_error(
        "ComputeGeometryStats: degenerate vocabulary, two words share one "
        "embedding (delta_min = 0)");
  }

  Eigen::MatrixXd regularized =
      lambda * stats.sigma +
      (1.0 - lambda) * Eigen::MatrixXd::Identity(d, d);
  Eigen::LLT<Eigen::MatrixXd> llt(regularized);
  if (llt.info() != Eigen::Success) {
    // lambda == 1 with a rank-deficient covariance: nudge back to positive
    // definite within the reconstruction tolerance.
    regularized += 1e-12 * Eigen::MatrixXd::Identity(d, d);
    llt.compute(regularized);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(
          "ComputeGeometryStats: covariance factorization failed");
    }
  }
  stats.chol = llt.matrixL();
  return stats;
}

}  // namespace mldp
