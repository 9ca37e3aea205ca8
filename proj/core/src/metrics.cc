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

#include "mldp/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace mldp {

PdReport EstimatePlausibleDeniability(const WordMechanism& mechanism,
                                      std::span<const std::string> candidates,
                                      int probe_count, int trials, Rng rng) {
  if (probe_count < 1 || trials < 1) {
    throw std::invalid_argument(
        "EstimatePlausibleDeniability: probe_count and trials must be >= 1");
  }
  if (candidates.empty()) {
    throw std::invalid_argument(
        "EstimatePlausibleDeniability: no candidate words");
  }

  PdReport report;
  report.trials = trials;

  // Partial Fisher-Yates over candidate indices: the first probe_count
  // entries become a uniform sample without replacement.
  std::vector<size_t> order(candidates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  size_t take = static_cast<size_t>(probe_count);
  if (take > order.size()) {
    take = order.size();
    report.probe_set_truncated = true;
  }
  Rng pick_rng = rng.Substream(0);
  for (size_t i = 0; i < take; ++i) {
    const size_t j = i + pick_rng.Below(order.size() - i);
    std::swap(order[i], order[j]);
  }

  double total_n = 0.0;
  double total_s = 0.0;
  for (size_t p = 0; p < take; ++p) {
    const std::string& word = candidates[order[p]];
    int unchanged = 0;
    std::unordered_set<std::string> distinct;
    for (int t = 0; t < trials; ++t) {
      Rng trial_rng = rng.Substream(1, p, static_cast<uint64_t>(t));
      std::string out = mechanism.PerturbToken(word, trial_rng);
      if (out == word) ++unchanged;
      distinct.insert(std::move(out));
    }
    PdProbe probe;
    probe.word = word;
    probe.n_w = 100.0 * unchanged / trials;
    probe.s_w = static_cast<int>(distinct.size());
    total_n += probe.n_w;
    total_s += probe.s_w;
    report.probes.push_back(std::move(probe));
  }
  report.mean_n_w = total_n / static_cast<double>(take);
  report.mean_s_w = total_s / static_cast<double>(take);
  return report;
}

double PerturbationPercentage(std::span<const TokenDocument> original,
                              std::span<const TokenDocument> perturbed) {
  if (original.size() != perturbed.size()) {
    throw std::invalid_argument(
        "PerturbationPercentage: corpora differ in document count");
  }
  size_t total = 0;
  size_t changed = 0;
  for (size_t d = 0; d < original.size(); ++d) {
    if (original[d].size() != perturbed[d].size()) {
      throw std::invalid_argument(
          "PerturbationPercentage: document " + std::to_string(d) +
          " is not token-aligned");
    }
    for (size_t i = 0; i < original[d].size(); ++i) {
      ++total;
      if (original[d][i] != perturbed[d][i]) ++changed;
    }
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(changed) / static_cast<double>(total);
}

double CosineSimilarityScore(std::span<const TokenDocument> original,
                             std::span<const TokenDocument> perturbed,
                             const SentenceEmbedder& embedder,
                             int* degenerate_count) {
  if (original.size() != perturbed.size()) {
    throw std::invalid_argument(
        "CosineSimilarityScore: corpora differ in document count");
  }
  if (original.empty()) return 0.0;
  int degenerate = 0;
  double total = 0.0;
  for (size_t d = 0; d < original.size(); ++d) {
    const Eigen::VectorXd a = embedder.Embed(d, original[d]);
    const Eigen::VectorXd b = embedder.Embed(d, perturbed[d]);
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
      ++degenerate;
      continue;  // contributes 0
    }
    const double cosine = std::clamp(a.dot(b) / (na * nb), 0.0, 1.0);
    total += cosine;
  }
  if (degenerate_count != nullptr) *degenerate_count = degenerate;
  return 100.0 * total / static_cast<double>(original.size());
}

double LowRetention(std::span<const TokenDocument> original,
                    std::span<const TokenDocument> perturbed, int n,
                    bool* clamped) {
  if (n < 1) throw std::invalid_argument("LowRetention: n must be >= 1");
  std::unordered_map<std::string, size_t> frequency;
  for (const TokenDocument& doc : original) {
    for (const std::string& token : doc) ++frequency[token];
  }
  if (clamped != nullptr) *clamped = false;
  if (frequency.empty()) return 0.0;

  std::vector<std::pair<const std::string*, size_t>> ranked;
  ranked.reserve(frequency.size());
  for (const auto& [token, count] : frequency) ranked.push_back({&token, count});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return *a.first < *b.first;
  });

  size_t take = static_cast<size_t>(n);
  if (take > ranked.size()) {
    take = ranked.size();
    if (clamped != nullptr) *clamped = true;
  }

  std::unordered_set<std::string> present;
  for (const TokenDocument& doc : perturbed) {
    for (const std::string& token : doc) present.insert(token);
  }
  size_t retained = 0;
  for (size_t i = 0; i < take; ++i) {
    if (present.count(*ranked[i].first) > 0) ++retained;
  }
  return 100.0 * static_cast<double>(retained) / static_cast<double>(take);
}

std::unordered_set<std::string> LoadWordList(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::transform(line.begin(), line.end(), line.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    words.insert(line);
  }
  return words;
}

double EnglishWordPct(std::span<const TokenDocument> corpus,
                      const std::unordered_set<std::string>& wordlist) {
  size_t total = 0;
  size_t hits = 0;
  for (const TokenDocument& doc : corpus) {
    for (const std::string& token : doc) {
      ++total;
      if (wordlist.count(token) > 0) ++hits;
    }
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace mldp
