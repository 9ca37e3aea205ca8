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
// The seven word-level privatization mechanisms behind one uniform
// contract: given a token and a privacy budget, emit a (possibly
// identical) replacement token. Documents are perturbed token by token,
// each token on its own RNG substream.

#ifndef MLDP_MECHANISMS_H_
#define MLDP_MECHANISMS_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mldp/embedding_store.h"
#include "mldp/rng.h"
#include "mldp/samplers.h"
#include "mldp/synonym_lexicon.h"

namespace mldp {

enum class MechanismKind {
  kSynTF,
  kCmp,
  kMahalanobis,
  kSanText,
  kGumbel,
  kVickrey,
  kTem,
};

std::string_view MechanismName(MechanismKind kind);
std::optional<MechanismKind> ParseMechanismName(std::string_view name);

struct MechanismConfig {
  MechanismKind kind = MechanismKind::kCmp;
  double epsilon = 1.0;
  double lambda = 0.2;               // Mahalanobis regularization weight
  double vickrey_t = 0.5;            // first/second neighbor balance
  double gamma = 0.5;                // TEM truncation radius
  std::string synonym_lexicon_path;  // SynTF
  // 0 keeps the exact full-vocabulary normalization; a positive value
  // restricts SanText's candidate set to the k nearest words, which changes
  // the sampling semantics and is reported in output metadata.
  int santext_topk = 0;
  // Bypasses the Gumbel feasibility calibration with a fixed noise scale.
  std::optional<double> gumbel_b_override;

  void Validate() const;  // throws std::invalid_argument
};

enum class OovPolicy {
  kPassThrough,  // out-of-vocabulary tokens are copied unchanged
  kDrop,         // out-of-vocabulary tokens are removed from the output
};

class WordMechanism {
 public:
  virtual ~WordMechanism() = default;

  virtual MechanismKind kind() const = 0;
  std::string_view name() const { return MechanismName(kind()); }

  // True when the mechanism can privatize this token (embedding vocabulary
  // membership, or lexicon membership for SynTF).
  virtual bool InVocabulary(std::string_view token) const = 0;

  // Returns the replacement token. Tokens outside the vocabulary pass
  // through unchanged; document-level OOV policy is applied by
  // PerturbDocument.
  virtual std::string PerturbToken(std::string_view token, Rng& rng) const = 0;
};

// Derived calibration of the truncated-Gumbel mechanism:
//   alpha = (epsilon - 2(1 + ln|W|)/delta_min) / 3
//   b     = 2*delta_max / min{ W0(2*alpha*delta_max), ln(alpha*delta_min) }
// The mechanism is configurable only when alpha > 0 and b > 0.
struct GumbelCalibration {
  double delta_max = 0.0;
  double delta_min = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  bool feasible = false;
  double min_feasible_epsilon = 0.0;  // 2(1 + ln|W|)/delta_min
};

GumbelCalibration CalibrateGumbel(double epsilon, double delta_max,
                                  double delta_min, size_t vocab_size);

// Candidate set and outcome of one Gumbel draw, exposed for tests.
struct GumbelDraw {
  int64_t k = 0;
  std::vector<NeighborResult> candidates;
  size_t chosen = 0;
};

// Builds the configured mechanism. `store` is required by every kind except
// SynTF; `lexicon` is required by SynTF. `geometry` (matching the config's
// lambda for Mahalanobis) is optional and recomputed from the store when
// absent. The returned object only references store/lexicon, which must
// outlive it; it is immutable and safe for concurrent PerturbToken calls
// with distinct Rng handles.
std::unique_ptr<WordMechanism> CreateMechanism(
    const MechanismConfig& config, const EmbeddingStore* store,
    const SynonymLexicon* lexicon = nullptr,
    const GeometryStats* geometry = nullptr);

// Perturbs each token independently on substream doc_rng.Substream(i).
// Under kPassThrough the output has exactly one token per input token.
std::vector<std::string> PerturbDocument(std::span<const std::string> tokens,
                                         const WordMechanism& mechanism,
                                         OovPolicy policy, const Rng& doc_rng);

// Probability that the Vickrey mechanism keeps the nearest neighbor given
// the two candidate distances: (1-t)*d2 / (t*d1 + (1-t)*d2), with the
// d1 == d2 == 0 limit resolved to 1-t.
double VickreyFirstChoiceProbability(double t, double d1, double d2);

// Runs one Gumbel draw with its candidate set captured; `mechanism` must be
// of kind kGumbel. Consumes the RNG identically to PerturbToken.
std::string PerturbGumbelTraced(const WordMechanism& mechanism,
                                std::string_view token, Rng& rng,
                                GumbelDraw* trace);

}  // namespace mldp

#endif  // MLDP_MECHANISMS_H_
