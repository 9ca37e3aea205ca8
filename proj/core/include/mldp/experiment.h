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
// End-to-end experiment driver: batch perturbation and metric evaluation
// over a (mechanism x embedding dimension x epsilon) grid, plausible
// deniability probing, PUC tables, the grid regression and a reproducible
// run manifest.

#ifndef MLDP_EXPERIMENT_H_
#define MLDP_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mldp/corpus.h"
#include "mldp/mechanisms.h"

namespace mldp {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

struct ExperimentConfig {
  std::string dataset_path;
  DatasetFormat dataset_format = DatasetFormat::kCsvWithLabel;
  std::map<int, std::string> embeddings;  // dimension -> file path
  std::vector<MechanismKind> mechanisms;
  std::vector<double> epsilons = {1.0, 5.0, 10.0};
  std::vector<double> alphas = {0.75, 0.5, 0.25};
  uint64_t seed = 0;
  bool seed_set = false;
  std::string output_dir;
  OovPolicy oov_policy = OovPolicy::kPassThrough;
  int probe_count = 25;
  int trials = 100;
  double lambda = 0.2;
  double vickrey_t = 0.5;
  double gamma = 0.5;
  int santext_topk = 0;
  std::optional<double> gumbel_b_override;
  std::string synonym_lexicon_path;
  std::string accuracy_table_path;  // enables PUC tables
  std::string wordlist_path;        // enables the English-word metric
  std::string token_map_path;
  std::string stopwords_path;  // overrides the bundled list
  std::optional<size_t> sample_size;
  int threads = 0;  // 0 = hardware concurrency
  size_t exact_threshold = 20000;

  // Parses "key = value" lines ('#' comments allowed) and rejects unknown
  // keys. See docs in README for the schema.
  static ExperimentConfig FromFile(const std::string& path);
  // Applies a single key/value assignment (shared by file parsing and CLI
  // overrides). Throws std::invalid_argument on unknown keys or bad values.
  void Set(const std::string& key, const std::string& value);
  void Validate() const;

  // Key/value snapshot in canonical order, as recorded in the manifest.
  std::vector<std::pair<std::string, std::string>> Snapshot() const;
};

// External utility inputs for PUC: rows of
// mechanism,dim,epsilon,accuracy,baseline.
struct AccuracyTable {
  struct Entry {
    double accuracy = 0.0;
    double baseline = 0.0;
  };
  std::map<std::tuple<std::string, int, double>, Entry> entries;

  static AccuracyTable Load(const std::string& path);
  const Entry* Find(std::string_view mechanism, int dim, double epsilon) const;
};

struct CellResult {
  std::string mechanism;
  int dim = 0;
  double epsilon = 0.0;
  bool ok = false;
  std::string error;
  double n_w = 0.0;
  double s_w = 0.0;
  double pp = 0.0;
  double cs = 0.0;
  double low = 0.0;
  std::optional<double> english_pct;
  double oov_rate = 0.0;  // % of corpus tokens outside the mechanism vocab
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::string output_dir;
  bool all_ok = false;
};

// Runs the full grid, writing into config.output_dir:
//   perturbed/<cell>.txt      one document per line: id TAB label TAB tokens
//   pd/<cell>.csv             per-probe-word plausible deniability
//   metrics.csv               one row per attempted cell
//   puc_alpha_<a>.csv         when an accuracy table is supplied
//   regression.{csv,txt}      OLS of CS on (epsilon, N_w, S_w, PP)
//   manifest.json             config snapshot, digests, timings, statuses
// A failing cell is recorded and the rest of the grid proceeds.
ExperimentResult RunExperiment(const ExperimentConfig& config);

}  // namespace mldp

#endif  // MLDP_EXPERIMENT_H_
