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

#include "mldp/mechanisms.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace mldp {
namespace {

constexpr std::string_view kNames[] = {"syntf",  "cmp",     "mahalanobis",
                                       "santext", "gumbel", "vickrey", "tem"};

class SynTfMechanism final : public WordMechanism {
 public:
  SynTfMechanism(const MechanismConfig& config, const SynonymLexicon& lexicon)
      : epsilon_(config.epsilon), lexicon_(lexicon) {}

  MechanismKind kind() const override { return MechanismKind::kSynTF; }

  bool InVocabulary(std::string_view token) const override {
    return lexicon_.Find(token) != nullptr;
  }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    const std::vector<RatedSynonym>* synonyms = lexicon_.Find(token);
    if (synonyms == nullptr) return std::string(token);
    std::vector<double> utilities;
    utilities.reserve(synonyms->size());
    for (const RatedSynonym& s : *synonyms) utilities.push_back(s.rating);
    const size_t pick = SampleExponentialMechanism(utilities, epsilon_, rng);
    return (*synonyms)[pick].token;
  }

 private:
  double epsilon_;
  const SynonymLexicon& lexicon_;
};

// Shared base for the mechanisms that perturb embedding vectors.
class EmbeddingMechanism : public WordMechanism {
 public:
  explicit EmbeddingMechanism(const EmbeddingStore& store) : store_(store) {}

  bool InVocabulary(std::string_view token) const override {
    return store_.Contains(token);
  }

 protected:
  const EmbeddingStore& store_;
};

class CmpMechanism final : public EmbeddingMechanism {
 public:
  CmpMechanism(const MechanismConfig& config, const EmbeddingStore& store)
      : EmbeddingMechanism(store) {
    params_.epsilon = config.epsilon;
    params_.dim = store.dim();
  }

  MechanismKind kind() const override { return MechanismKind::kCmp; }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    const auto id = store_.Find(token);
    if (!id) return std::string(token);
    const Eigen::VectorXd noisy =
        store_.Embedding(*id) + SampleSphericalLaplace(params_, rng);
    return store_.word(store_.NearestNeighbor(noisy).id);
  }

 private:
  NoiseParams params_;
};

class MahalanobisMechanism final : public EmbeddingMechanism {
 public:
  MahalanobisMechanism(const MechanismConfig& config,
                       const EmbeddingStore& store, GeometryStats geometry)
      : EmbeddingMechanism(store) {
    params_.epsilon = config.epsilon;
    params_.dim = store.dim();
    params_.lambda = config.lambda;
    params_.chol = std::move(geometry.chol);
  }

  MechanismKind kind() const override { return MechanismKind::kMahalanobis; }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    const auto id = store_.Find(token);
    if (!id) return std::string(token);
    const Eigen::VectorXd noisy =
        store_.Embedding(*id) + SampleMahalanobis(params_, rng);
    return store_.word(store_.NearestNeighbor(noisy).id);
  }

 private:
  NoiseParams params_;
};

class SanTextMechanism final : public EmbeddingMechanism {
 public:
  SanTextMechanism(const MechanismConfig& config, const EmbeddingStore& store)
      : EmbeddingMechanism(store),
        epsilon_(config.epsilon),
        topk_(config.santext_topk) {}

  MechanismKind kind() const override { return MechanismKind::kSanText; }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    const auto id = store_.Find(token);
    if (!id) return std::string(token);
    const Eigen::VectorXd center = store_.Embedding(*id);

    // Pr[M(x) = y] = C_x * exp(-epsilon/2 * d(phi(x), phi(y))), normalized
    // over the candidate set. The input itself sits at distance zero, which
    // also anchors the weights so no exponent overflows.
    std::vector<NeighborResult> candidates;
    if (topk_ > 0) {
      candidates = store_.KNearest(center, static_cast<size_t>(topk_));
    } else {
      candidates.reserve(store_.size());
      for (WordId y = 0; y < store_.size(); ++y) {
        candidates.push_back({y, store_.Distance(y, center)});
      }
    }
    double total = 0.0;
    std::vector<double> weights(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
      weights[i] = std::exp(-0.5 * epsilon_ * candidates[i].distance);
      total += weights[i];
    }
    const double target = rng.Uniform() * total;
    double cumulative = 0.0;
    size_t pick = candidates.size() - 1;
    for (size_t i = 0; i < weights.size(); ++i) {
      cumulative += weights[i];
      if (target < cumulative) {
        pick = i;
        break;
      }
    }
    return store_.word(candidates[pick].id);
  }

 private:
  double epsilon_;
  int topk_;
};

class GumbelMechanism final : public EmbeddingMechanism {
 public:
  GumbelMechanism(const MechanismConfig& config, const EmbeddingStore& store,
                  const GeometryStats& geometry)
      : EmbeddingMechanism(store) {
    calibration_ = CalibrateGumbel(config.epsilon, geometry.delta_max,
                                   geometry.delta_min, store.size());
    if (config.gumbel_b_override) {
      b_ = *config.gumbel_b_override;
      if (!(b_ > 0)) {
        throw std::invalid_argument("gumbel: b override must be positive");
      }
    } else if (!calibration_.feasible) {
      throw std::invalid_argument(
          "gumbel: infeasible at epsilon " + std::to_string(config.epsilon) +
          "; the noise scale calibration needs epsilon > 2(1+ln|W|)/delta_min"
          " = " +
          std::to_string(calibration_.min_feasible_epsilon) +
          " plus margin (alpha*delta_min > 1). Pass an explicit b override "
          "to bypass the calibration.");
    } else {
      b_ = calibration_.b;
    }
    mean_k_ = std::log(static_cast<double>(store.size()));
  }

  MechanismKind kind() const override { return MechanismKind::kGumbel; }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    return PerturbTokenTraced(token, rng, nullptr);
  }

  std::string PerturbTokenTraced(std::string_view token, Rng& rng,
                                 GumbelDraw* trace) const {
    const auto id = store_.Find(token);
    if (!id) return std::string(token);
    const int64_t k = store_.size() == 1
                          ? 1
                          : SampleTruncatedPoisson(mean_k_, 1, store_.size(), rng);
    std::vector<NeighborResult> candidates =
        store_.KNearest(store_.Embedding(*id), static_cast<size_t>(k));
    // The candidate list opens with the input word itself. A zero-distance
    // duplicate vector could displace it under id tie-breaking; restore it.
    if (candidates[0].id != *id) {
      auto self = std::find_if(candidates.begin(), candidates.end(),
                               [&](const NeighborResult& n) { return n.id == *id; });
      if (self == candidates.end()) {
        candidates.back() = {*id, 0.0};
        self = std::prev(candidates.end());
      }
      std::rotate(candidates.begin(), self, self + 1);
      std::sort(candidates.begin() + 1, candidates.end(),
                [](const NeighborResult& a, const NeighborResult& b) {
                  return a.distance != b.distance ? a.distance < b.distance
                                                  : a.id < b.id;
                });
    }

    size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < candidates.size(); ++j) {
      const double noise =
          SampleTruncatedGumbel(0.0, b_, calibration_.delta_max, rng);
      const double score = candidates[j].distance + noise;
      if (score < best_score) {
        best_score = score;
        best = j;
      }
    }
    if (trace != nullptr) {
      trace->k = k;
      trace->candidates = candidates;
      trace->chosen = best;
    }
    return store_.word(candidates[best].id);
  }

 private:
  GumbelCalibration calibration_;
  double b_ = 0.0;
  double mean_k_ = 0.0;
};

class VickreyMechanism final : public EmbeddingMechanism {
 public:
  VickreyMechanism(const MechanismConfig& config, const EmbeddingStore& store)
      : EmbeddingMechanism(store), t_(config.vickrey_t) {
    params_.epsilon = config.epsilon;
    params_.dim = store.dim();
  }

  MechanismKind kind() const override { return MechanismKind::kVickrey; }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    const auto id = store_.Find(token);
    if (!id) return std::string(token);
    const Eigen::VectorXd noisy =
        store_.Embedding(*id) + SampleSphericalLaplace(params_, rng);
    const std::array<WordId, 1> exclude{*id};
    const std::vector<NeighborResult> near = store_.KNearest(noisy, 2, exclude);
    if (near.empty()) return std::string(token);  // single-word vocabulary
    if (near.size() == 1) return store_.word(near[0].id);
    const double p =
        VickreyFirstChoiceProbability(t_, near[0].distance, near[1].distance);
    return store_.word(rng.Uniform() < p ? near[0].id : near[1].id);
  }

 private:
  NoiseParams params_;
  double t_;
};

class TemMechanism final : public EmbeddingMechanism {
 public:
  TemMechanism(const MechanismConfig& config, const EmbeddingStore& store)
      : EmbeddingMechanism(store),
        epsilon_(config.epsilon),
        gamma_(config.gamma) {}

  MechanismKind kind() const override { return MechanismKind::kTem; }

  std::string PerturbToken(std::string_view token, Rng& rng) const override {
    const auto id = store_.Find(token);
    if (!id) return std::string(token);
    // L_w: everything within gamma of the token, the token itself included
    // at distance zero. Ascending id order fixes the noise-draw order.
    const std::vector<NeighborResult> members =
        store_.WithinRadius(store_.Embedding(*id), gamma_);
    const int64_t complement_size =
        static_cast<int64_t>(store_.size()) -
        static_cast<int64_t>(members.size());

    const double noise_scale = 2.0 / epsilon_;
    double best_score = -std::numeric_limits<double>::infinity();
    size_t best = 0;
    bool bottom_wins = false;
    for (size_t j = 0; j < members.size(); ++j) {
      const double score =
          -members[j].distance + SampleGumbel(0.0, noise_scale, rng);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (complement_size > 0) {
      const double bottom_base =
          -gamma_ + 2.0 * std::log(static_cast<double>(complement_size)) /
                        epsilon_;
      const double score = bottom_base + SampleGumbel(0.0, noise_scale, rng);
      if (score > best_score) bottom_wins = true;
    }
    if (!bottom_wins) return store_.word(members[best].id);
    return store_.word(SampleFromComplement(members, complement_size, rng));
  }

 private:
  // Uniform draw from the vocabulary minus the (id-sorted) member list.
  WordId SampleFromComplement(const std::vector<NeighborResult>& members,
                              int64_t complement_size, Rng& rng) const {
    WordId candidate =
        static_cast<WordId>(rng.Below(static_cast<uint64_t>(complement_size)));
    for (const NeighborResult& member : members) {
      if (member.id <= candidate) {
        ++candidate;
      } else {
        break;
      }
    }
    return candidate;
  }

  double epsilon_;
  double gamma_;
};

}  // namespace

std::string_view MechanismName(MechanismKind kind) {
  return kNames[static_cast<int>(kind)];
}

std::optional<MechanismKind> ParseMechanismName(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kNames)); ++i) {
    if (kNames[i] == name) return static_cast<MechanismKind>(i);
  }
  return std::nullopt;
}

void MechanismConfig::Validate() const {
  // SynTF and SanText remain well defined in the epsilon -> 0 limit (both
  // degrade to uniform choice); the noise-adding mechanisms do not.
  const bool zero_ok =
      kind == MechanismKind::kSynTF || kind == MechanismKind::kSanText;
  if (zero_ok ? !(epsilon >= 0) : !(epsilon > 0)) {
    throw std::invalid_argument("mechanism config: invalid epsilon " +
                                std::to_string(epsilon));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("mechanism config: lambda must be in [0, 1]");
  }
  if (!(vickrey_t >= 0.0 && vickrey_t <= 1.0)) {
    throw std::invalid_argument("mechanism config: t must be in [0, 1]");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("mechanism config: gamma must be positive");
  }
  if (santext_topk < 0) {
    throw std::invalid_argument("mechanism config: santext_topk must be >= 0");
  }
}

GumbelCalibration CalibrateGumbel(double epsilon, double delta_max,
                                  double delta_min, size_t vocab_size) {
  if (!(delta_max > 0) || !(delta_min > 0) || vocab_size == 0) {
    throw std::invalid_argument("CalibrateGumbel: degenerate geometry");
  }
  GumbelCalibration c;
  c.delta_max = delta_max;
  c.delta_min = delta_min;
  c.min_feasible_epsilon =
      2.0 * (1.0 + std::log(static_cast<double>(vocab_size))) / delta_min;
  c.alpha = (epsilon - c.min_feasible_epsilon) / 3.0;
  if (c.alpha > 0) {
    const double cap = std::min(LambertW0(2.0 * c.alpha * delta_max),
                                std::log(c.alpha * delta_min));
    if (cap > 0) {
      c.b = 2.0 * delta_max / cap;
      c.feasible = true;
    }
  }
  return c;
}

std::unique_ptr<WordMechanism> CreateMechanism(const MechanismConfig& config,
                                               const EmbeddingStore* store,
                                               const SynonymLexicon* lexicon,
                                               const GeometryStats* geometry) {
  config.Validate();
  if (config.kind == MechanismKind::kSynTF) {
    if (lexicon == nullptr) {
      throw std::invalid_argument("syntf: missing synonym lexicon");
    }
    return std::make_unique<SynTfMechanism>(config, *lexicon);
  }
  if (store == nullptr) {
    throw std::invalid_argument(std::string(MechanismName(config.kind)) +
                                ": missing embedding store");
  }
  switch (config.kind) {
    case MechanismKind::kCmp:
      return std::make_unique<CmpMechanism>(config, *store);
    case MechanismKind::kMahalanobis: {
      if (geometry != nullptr && geometry->lambda == config.lambda) {
        return std::make_unique<MahalanobisMechanism>(config, *store, *geometry);
      }
      return std::make_unique<MahalanobisMechanism>(
          config, *store, ComputeGeometryStats(*store, config.lambda));
    }
    case MechanismKind::kSanText:
      return std::make_unique<SanTextMechanism>(config, *store);
    case MechanismKind::kGumbel: {
      if (geometry != nullptr) {
        return std::make_unique<GumbelMechanism>(config, *store, *geometry);
      }
      const GeometryStats computed = ComputeGeometryStats(*store, config.lambda);
      return std::make_unique<GumbelMechanism>(config, *store, computed);
    }
    case MechanismKind::kVickrey:
      return std::make_unique<VickreyMechanism>(config, *store);
    case MechanismKind::kTem:
      return std::make_unique<TemMechanism>(config, *store);
    case MechanismKind::kSynTF:
      break;
  }
  throw std::invalid_argument("unknown mechanism kind");
}

std::vector<std::string> PerturbDocument(std::span<const std::string> tokens,
                                         const WordMechanism& mechanism,
                                         OovPolicy policy, const Rng& doc_rng) {
  std::vector<std::string> output;
  output.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!mechanism.InVocabulary(tokens[i])) {
      if (policy == OovPolicy::kPassThrough) output.push_back(tokens[i]);
      continue;
    }
    Rng token_rng = doc_rng.Substream(i);
    output.push_back(mechanism.PerturbToken(tokens[i], token_rng));
  }
  return output;
}

double VickreyFirstChoiceProbability(double t, double d1, double d2) {
  const double denom = t * d1 + (1.0 - t) * d2;
  if (denom <= 0.0) return 1.0 - t;
  return (1.0 - t) * d2 / denom;
}

std::string PerturbGumbelTraced(const WordMechanism& mechanism,
                                std::string_view token, Rng& rng,
                                GumbelDraw* trace) {
  if (mechanism.kind() != MechanismKind::kGumbel) {
    throw std::invalid_argument("PerturbGumbelTraced: not a gumbel mechanism");
  }
  return static_cast<const GumbelMechanism&>(mechanism).PerturbTokenTraced(
      token, rng, trace);
}

}  // namespace mldp
