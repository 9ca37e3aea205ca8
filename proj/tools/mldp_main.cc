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
// mldp: word-level metric-LDP text perturbation and benchmark driver.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mldp/corpus.h"
#include "mldp/csv.h"
#include "mldp/experiment.h"
#include "mldp/mechanisms.h"
#include "mldp/metrics.h"
#include "mldp/ols.h"
#include "mldp/report.h"
#include "mldp/scoring.h"
#include "mldp/sentence_embedder.h"

namespace {

using namespace mldp;

struct MechanismFlags {
  std::string mechanism;
  double epsilon = 1.0;
  double lambda = 0.2;
  double vickrey_t = 0.5;
  double gamma = 0.5;
  int santext_topk = 0;
  double gumbel_b = 0.0;  // 0 = use the calibrated value
  std::string synonym_lexicon;

  void Register(CLI::App* cmd) {
    cmd->add_option("--mechanism", mechanism,
                    "syntf|cmp|mahalanobis|santext|gumbel|vickrey|tem")
        ->required();
    cmd->add_option("--epsilon", epsilon, "privacy budget")->required();
    cmd->add_option("--lambda", lambda, "Mahalanobis regularization weight");
    cmd->add_option("--vickrey-t", vickrey_t, "Vickrey tuning parameter");
    cmd->add_option("--gamma", gamma, "TEM truncation radius");
    cmd->add_option("--santext-topk", santext_topk,
                    "restrict SanText to the k nearest candidates (0 = all)");
    cmd->add_option("--gumbel-b", gumbel_b,
                    "bypass the Gumbel calibration with a fixed noise scale");
    cmd->add_option("--synonym-lexicon", synonym_lexicon,
                    "SynTF synonym file (token TAB synonym[:rating] ...)");
  }

  MechanismConfig ToConfig() const {
    MechanismConfig config;
    const auto kind = ParseMechanismName(mechanism);
    if (!kind) throw CLI::ValidationError("unknown mechanism: " + mechanism);
    config.kind = *kind;
    config.epsilon = epsilon;
    config.lambda = lambda;
    config.vickrey_t = vickrey_t;
    config.gamma = gamma;
    config.santext_topk = santext_topk;
    if (gumbel_b > 0) config.gumbel_b_override = gumbel_b;
    config.synonym_lexicon_path = synonym_lexicon;
    return config;
  }
};

struct CorpusFlags {
  std::string input;
  std::string format = "csv";
  std::string stopwords;
  std::string token_map;
  uint64_t sample_size = 0;
  uint64_t sample_seed = 0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--input", input, "dataset file")->required();
    cmd->add_option("--format", format, "csv|lines (default csv)");
    cmd->add_option("--stopwords", stopwords,
                    "replace the bundled stopword list");
    cmd->add_option("--token-map", token_map,
                    "post-stopword token rewrite file (from TAB to)");
    cmd->add_option("--sample-size", sample_size,
                    "seeded uniform subsample size (0 = all)");
    cmd->add_option("--sample-seed", sample_seed, "subsample seed");
  }

  Corpus Load() const {
    std::vector<std::string> storage;
    std::unordered_set<std::string_view> set;
    if (!stopwords.empty()) {
      storage = LoadStopwordFile(stopwords);
      set = StopwordSetFromLines(storage);
    } else {
      set = DefaultStopwordSet();
    }
    TokenMap map;
    const TokenMap* map_ptr = nullptr;
    if (!token_map.empty()) {
      map = LoadTokenMap(token_map);
      map_ptr = &map;
    }
    const DatasetFormat dataset_format = format == "lines"
                                             ? DatasetFormat::kPlainLines
                                             : DatasetFormat::kCsvWithLabel;
    Corpus corpus = IngestDataset(input, dataset_format, set, map_ptr);
    if (sample_size > 0) {
      corpus = SampleCorpus(corpus, sample_size, sample_seed);
    }
    return corpus;
  }
};

std::unique_ptr<WordMechanism> BuildMechanism(const MechanismFlags& flags,
                                              const EmbeddingStore* store,
                                              std::optional<SynonymLexicon>& lexicon) {
  const MechanismConfig config = flags.ToConfig();
  if (config.kind == MechanismKind::kSynTF) {
    if (config.synonym_lexicon_path.empty()) {
      throw CLI::ValidationError("syntf requires --synonym-lexicon");
    }
    lexicon = SynonymLexicon::Load(config.synonym_lexicon_path);
    return CreateMechanism(config, nullptr, &*lexicon);
  }
  return CreateMechanism(config, store);
}

int RunPerturb(const MechanismFlags& mech_flags, const CorpusFlags& corpus_flags,
               const std::string& embedding_path, int dim, uint64_t seed,
               const std::string& oov, const std::string& output) {
  std::optional<EmbeddingStore> store;
  if (mech_flags.mechanism != "syntf") {
    store = EmbeddingStore::Load(embedding_path,
                                 dim > 0 ? std::optional<int>(dim) : std::nullopt);
  }
  std::optional<SynonymLexicon> lexicon;
  const auto mechanism =
      BuildMechanism(mech_flags, store ? &*store : nullptr, lexicon);
  const OovPolicy policy =
      oov == "drop" ? OovPolicy::kDrop : OovPolicy::kPassThrough;

  Corpus corpus = corpus_flags.Load();
  const Rng master(seed);
  Corpus perturbed = corpus;
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    perturbed.documents[d].tokens = PerturbDocument(
        corpus.documents[d].tokens, *mechanism, policy, master.Substream(d));
  }
  WriteTokenizedCorpus(output, perturbed);
  std::cout << "wrote " << perturbed.documents.size() << " documents to "
            << output << "\n";
  return 0;
}

int RunPd(const MechanismFlags& mech_flags, const CorpusFlags& corpus_flags,
          const std::string& embedding_path, int dim, uint64_t seed,
          int probe_count, int trials, const std::string& output) {
  std::optional<EmbeddingStore> store;
  if (mech_flags.mechanism != "syntf") {
    store = EmbeddingStore::Load(embedding_path,
                                 dim > 0 ? std::optional<int>(dim) : std::nullopt);
  }
  std::optional<SynonymLexicon> lexicon;
  const auto mechanism =
      BuildMechanism(mech_flags, store ? &*store : nullptr, lexicon);

  const Corpus corpus = corpus_flags.Load();
  std::vector<std::string> candidates;
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& doc : corpus.documents) {
      for (const auto& token : doc.tokens) {
        if (mechanism->InVocabulary(token) && seen.insert(token).second) {
          candidates.push_back(token);
        }
      }
    }
  }
  if (candidates.empty()) {
    std::cerr << "no in-vocabulary tokens to probe\n";
    return 1;
  }
  const PdReport report = EstimatePlausibleDeniability(
      *mechanism, candidates, probe_count, trials, Rng(seed));
  if (report.probe_set_truncated) {
    std::cerr << "warning: only " << report.probes.size()
              << " candidate words available, probing all of them\n";
  }
  std::cout << "N_w = " << report.mean_n_w << "  S_w = " << report.mean_s_w
            << "  (probes = " << report.probes.size()
            << ", trials = " << report.trials << ")\n";
  if (!output.empty()) {
    std::ofstream out(output, std::ios::binary);
    out << "word,n_w,s_w\n";
    for (const PdProbe& probe : report.probes) {
      out << CsvEscape(probe.word) << ',' << probe.n_w << ',' << probe.s_w
          << '\n';
    }
  }
  return 0;
}

int RunMetrics(const CorpusFlags& corpus_flags, const std::string& perturbed_path,
               const std::string& embedding_path, const std::string& wordlist,
               const std::string& sentence_vectors) {
  const Corpus original = corpus_flags.Load();
  const Corpus perturbed = ReadTokenizedCorpus(perturbed_path);
  if (original.documents.size() != perturbed.documents.size()) {
    std::cerr << "document count mismatch between original and perturbed\n";
    return 1;
  }
  const auto original_tokens = original.TokenView();
  const auto perturbed_tokens = perturbed.TokenView();

  const EmbeddingStore store = EmbeddingStore::Load(embedding_path);
  std::unique_ptr<SentenceEmbedder> embedder;
  if (!sentence_vectors.empty()) {
    embedder = std::make_unique<PrecomputedSentenceEmbedder>(
        PrecomputedSentenceEmbedder::Load(sentence_vectors));
  } else {
    embedder = std::make_unique<MeanWordVectorEmbedder>(store);
  }

  int degenerate = 0;
  const double pp = PerturbationPercentage(original_tokens, perturbed_tokens);
  const double cs = CosineSimilarityScore(original_tokens, perturbed_tokens,
                                          *embedder, &degenerate);
  bool clamped = false;
  const double low = LowRetention(original_tokens, perturbed_tokens, 1000,
                                  &clamped);
  std::cout << "PP  = " << pp << "\nCS  = " << cs << "\nLOW = " << low << "\n";
  if (!wordlist.empty()) {
    const auto words = LoadWordList(wordlist);
    std::cout << "EN%% = " << EnglishWordPct(perturbed_tokens, words) << "\n";
  }
  if (degenerate > 0) {
    std::cerr << "warning: " << degenerate
              << " documents embedded to the zero vector and contributed 0\n";
  }
  if (clamped) {
    std::cerr << "warning: fewer than 1000 distinct original words; used all\n";
  }
  return 0;
}

int RunPuc(const std::string& privacy_path, const std::string& accuracy_path,
           const std::vector<double>& alphas, const std::string& output_prefix) {
  const AccuracyTable accuracy = AccuracyTable::Load(accuracy_path);
  const auto rows = ReadCsvFile(privacy_path);
  const std::vector<std::string> expected = {"mechanism", "dim", "epsilon",
                                             "n_w", "s_w", "pp", "cs", "low"};
  if (rows.empty() || rows.front() != expected) {
    std::cerr << "privacy csv header must be mechanism,dim,epsilon,n_w,s_w,"
                 "pp,cs,low\n";
    return 1;
  }
  std::vector<PucCell> grid;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    PucCell cell;
    cell.mechanism = row[0];
    cell.dim = std::stoi(row[1]);
    cell.epsilon = std::stod(row[2]);
    const auto* entry = accuracy.Find(cell.mechanism, cell.dim, cell.epsilon);
    if (entry == nullptr) {
      std::cerr << "no accuracy entry for " << cell.mechanism << "/"
                << cell.dim << "/" << cell.epsilon << "\n";
      return 1;
    }
    cell.input.acc = entry->accuracy;
    cell.input.baseline_acc = entry->baseline;
    cell.input.n_w = std::stod(row[3]);
    cell.input.s_w = std::stod(row[4]);
    cell.input.pp = std::stod(row[5]);
    cell.input.cs = std::stod(row[6]);
    cell.input.low = std::stod(row[7]);
    grid.push_back(std::move(cell));
  }
  const PucTable table = BuildPucTable(grid, alphas);
  std::cout << RenderPucText(table);
  if (!output_prefix.empty()) {
    std::ofstream out(output_prefix + ".csv", std::ios::binary);
    out << RenderPucCsv(table);
  }
  return 0;
}

int RunRegress(const std::string& metrics_path, const std::string& output) {
  const auto rows = ReadCsvFile(metrics_path);
  const std::vector<std::string> expected = {"mechanism", "dim", "epsilon",
                                             "n_w", "s_w", "pp", "cs", "low"};
  if (rows.empty() || rows.front() != expected) {
    std::cerr << "metrics csv header must be mechanism,dim,epsilon,n_w,s_w,"
                 "pp,cs,low\n";
    return 1;
  }
  const size_t n = rows.size() - 1;
  Eigen::MatrixXd predictors(n, 4);
  Eigen::VectorXd response(n);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto i = static_cast<Eigen::Index>(r - 1);
    predictors(i, 0) = std::stod(row[2]);
    predictors(i, 1) = std::stod(row[3]);
    predictors(i, 2) = std::stod(row[4]);
    predictors(i, 3) = std::stod(row[5]);
    response(i) = std::stod(row[6]);
  }
  const RegressionReport report =
      OlsFit(predictors, response, {"epsilon", "n_w", "s_w", "pp"});
  std::cout << report.ToText();
  if (!output.empty()) {
    std::ofstream out(output, std::ios::binary);
    out << report.ToText();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word-level metric-LDP text perturbation benchmark"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "run the full experiment grid");
  std::string run_config;
  std::vector<std::pair<std::string, std::string>> run_overrides;
  run->add_option("--config", run_config, "experiment config file");
  std::map<std::string, std::string> run_flags;
  for (const char* key :
       {"dataset", "dataset_format", "mechanisms", "epsilons", "alphas",
        "output_dir", "oov_policy", "probe_count", "trials", "lambda",
        "vickrey_t", "gamma", "santext_topk", "gumbel_b_override",
        "synonym_lexicon", "accuracy_table", "wordlist", "token_map",
        "stopwords", "sample_size", "threads", "exact_threshold", "seed"}) {
    std::string flag = "--";
    for (const char* p = key; *p; ++p) flag += *p == '_' ? '-' : *p;
    run->add_option_function<std::string>(
        flag,
        [&run_overrides, key = std::string(key)](const std::string& value) {
          run_overrides.emplace_back(key, value);
        },
        std::string("config key ") + key);
  }
  std::vector<std::string> run_embeddings;
  run->add_option("--embedding", run_embeddings,
                  "DIM=PATH (repeatable), e.g. --embedding 50=glove.50d.txt");

  // ---- perturb ----
  auto* perturb = app.add_subcommand("perturb", "perturb one dataset");
  MechanismFlags perturb_mech;
  CorpusFlags perturb_corpus;
  std::string perturb_embedding, perturb_oov = "passthrough", perturb_output;
  int perturb_dim = 0;
  uint64_t perturb_seed = 0;
  perturb_mech.Register(perturb);
  perturb_corpus.Register(perturb);
  perturb->add_option("--embedding-file", perturb_embedding,
                      "embedding text file (GloVe format)");
  perturb->add_option("--dim", perturb_dim, "expected embedding dimension");
  perturb->add_option("--seed", perturb_seed, "master seed")->required();
  perturb->add_option("--oov", perturb_oov, "passthrough|drop");
  perturb->add_option("--output", perturb_output, "perturbed corpus file")
      ->required();

  // ---- pd ----
  auto* pd = app.add_subcommand("pd", "estimate plausible deniability");
  MechanismFlags pd_mech;
  CorpusFlags pd_corpus;
  std::string pd_embedding, pd_output;
  int pd_dim = 0, pd_probes = 25, pd_trials = 100;
  uint64_t pd_seed = 0;
  pd_mech.Register(pd);
  pd_corpus.Register(pd);
  pd->add_option("--embedding-file", pd_embedding, "embedding text file");
  pd->add_option("--dim", pd_dim, "expected embedding dimension");
  pd->add_option("--seed", pd_seed, "master seed")->required();
  pd->add_option("--probe-count", pd_probes, "words to probe (default 25)");
  pd->add_option("--trials", pd_trials, "perturbations per word (default 100)");
  pd->add_option("--output", pd_output, "per-word csv output");

  // ---- metrics ----
  auto* metrics = app.add_subcommand(
      "metrics", "PP/CS/LOW (and optional English %) between two corpora");
  CorpusFlags metrics_corpus;
  std::string metrics_perturbed, metrics_embedding, metrics_wordlist,
      metrics_vectors;
  metrics_corpus.Register(metrics);
  metrics->add_option("--perturbed", metrics_perturbed,
                      "tokenized perturbed corpus")
      ->required();
  metrics->add_option("--embedding-file", metrics_embedding,
                      "embedding file for the sentence embedder")
      ->required();
  metrics->add_option("--wordlist", metrics_wordlist,
                      "newline-separated reference word list");
  metrics->add_option("--sentence-vectors", metrics_vectors,
                      "precomputed sentence vectors (doc TAB floats)");

  // ---- puc ----
  auto* puc = app.add_subcommand("puc", "privacy-utility composite tables");
  std::string puc_privacy, puc_accuracy, puc_prefix;
  std::vector<double> puc_alphas{0.75, 0.5, 0.25};
  puc->add_option("--privacy", puc_privacy,
                  "csv: mechanism,dim,epsilon,n_w,s_w,pp,cs,low")
      ->required();
  puc->add_option("--accuracy", puc_accuracy,
                  "csv: mechanism,dim,epsilon,accuracy,baseline")
      ->required();
  puc->add_option("--alphas", puc_alphas, "tuning parameters");
  puc->add_option("--output-prefix", puc_prefix, "write <prefix>.csv");

  // ---- regress ----
  auto* regress =
      app.add_subcommand("regress", "OLS of CS on (epsilon, N_w, S_w, PP)");
  std::string regress_metrics, regress_output;
  regress->add_option("--metrics", regress_metrics,
                      "csv: mechanism,dim,epsilon,n_w,s_w,pp,cs,low")
      ->required();
  regress->add_option("--output", regress_output, "also write the report here");

  // ---- report ----
  auto* report = app.add_subcommand("report", "render a run directory");
  std::string report_dir;
  report->add_option("--dir", report_dir, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ExperimentConfig config;
      if (!run_config.empty()) config = ExperimentConfig::FromFile(run_config);
      for (const std::string& spec : run_embeddings) {
        const size_t eq = spec.find('=');
        if (eq == std::string::npos) {
          std::cerr << "--embedding expects DIM=PATH\n";
          return 2;
        }
        config.Set("embedding." + spec.substr(0, eq), spec.substr(eq + 1));
      }
      for (const auto& [key, value] : run_overrides) config.Set(key, value);
      const ExperimentResult result = RunExperiment(config);
      int failed = 0;
      for (const CellResult& cell : result.cells) {
        if (!cell.ok) {
          ++failed;
          std::cerr << "cell " << cell.mechanism << "/d" << cell.dim << "/e"
                    << cell.epsilon << " failed: " << cell.error << "\n";
        }
      }
      std::cout << result.cells.size() - failed << "/" << result.cells.size()
                << " grid cells completed; outputs in " << result.output_dir
                << "\n";
      return result.all_ok ? 0 : 1;
    }
    if (perturb->parsed()) {
      return RunPerturb(perturb_mech, perturb_corpus, perturb_embedding,
                        perturb_dim, perturb_seed, perturb_oov, perturb_output);
    }
    if (pd->parsed()) {
      return RunPd(pd_mech, pd_corpus, pd_embedding, pd_dim, pd_seed, pd_probes,
                   pd_trials, pd_output);
    }
    if (metrics->parsed()) {
      return RunMetrics(metrics_corpus, metrics_perturbed, metrics_embedding,
                        metrics_wordlist, metrics_vectors);
    }
    if (puc->parsed()) {
      return RunPuc(puc_privacy, puc_accuracy, puc_alphas, puc_prefix);
    }
    if (regress->parsed()) {
      return RunRegress(regress_metrics, regress_output);
    }
    if (report->parsed()) {
      std::cout << EmitReport(report_dir);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
