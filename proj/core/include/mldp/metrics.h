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
//
// Privacy metric suite: plausible-deniability probing, perturbation
// percentage, cosine-similarity score, least-occurring-word retention and
// English-word percentage. All metrics are pure over immutable corpora.

#ifndef MLDP_METRICS_H_
#define MLDP_METRICS_H_

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "mldp/mechanisms.h"
#include "mldp/rng.h"
#include "mldp/sentence_embedder.h"

namespace mldp {

using TokenDocument = std::vector<std::string>;

struct PdProbe {
  std::string word;
  double n_w = 0.0;  // % of trials left unchanged
  int s_w = 0;       // distinct outputs observed across the trials
};

// Monte-Carlo plausible-deniability estimate: probe words are drawn
// uniformly without replacement and each is perturbed `trials` times.
struct PdReport {
  std::vector<PdProbe> probes;
  double mean_n_w = 0.0;
  double mean_s_w = 0.0;
  int trials = 0;
  // Fewer candidate words than requested probes; all candidates were used.
  bool probe_set_truncated = false;
};

PdReport EstimatePlausibleDeniability(const WordMechanism& mechanism,
                                      std::span<const std::string> candidates,
                                      int probe_count, int trials, Rng rng);

// Percentage of positions whose token changed, over token-aligned corpora.
// Symmetric in its arguments; throws on misaligned documents.
double PerturbationPercentage(std::span<const TokenDocument> original,
                              std::span<const TokenDocument> perturbed);

// Mean cosine similarity between original and perturbed sentence
// embeddings, clamped to [0, 1] and scaled to [0, 100]. A document whose
// perturbed side embeds to the zero vector contributes 0; the count of such
// documents is reported through degenerate_count when non-null.
double CosineSimilarityScore(std::span<const TokenDocument> original,
                             std::span<const TokenDocument> perturbed,
                             const SentenceEmbedder& embedder,
                             int* degenerate_count = nullptr);

// Retention of the n least-occurring original words: tokens are ranked by
// ascending frequency (ties lexicographic) and the result is the percentage
// still present anywhere in the perturbed corpus. When fewer than n
// distinct words exist, all are used and *clamped is set.
double LowRetention(std::span<const TokenDocument> original,
                    std::span<const TokenDocument> perturbed, int n = 1000,
                    bool* clamped = nullptr);

// Percentage of corpus tokens found in the word list; lookups lowercase the
// list so an upstream-lowercased corpus matches mixed-case entries.
std::unordered_set<std::string> LoadWordList(const std::string& path);
double EnglishWordPct(std::span<const TokenDocument> corpus,
                      const std::unordered_set<std::string>& wordlist);

}  // namespace mldp

#endif  // MLDP_METRICS_H_
