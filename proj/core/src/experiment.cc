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

#include "mldp/experiment.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "mldp/csv.h"
#include "mldp/digest.h"
#include "mldp/metrics.h"
#include "mldp/ols.h"
#include "mldp/scoring.h"
#include "mldp/sentence_embedder.h"

namespace mldp {
namespace {

namespace fs = std::filesystem;

double ParseDouble(const std::string& text, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number '" + text + "' for " + context);
  }
  return value;
}

int64_t ParseInt(const std::string& text, const std::string& context) {
  int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad integer '" + text + "' for " + context);
  }
  return value;
}

std::vector<std::string> SplitCommaList(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else if (c != ' ') {
      current.push_back(c);
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

std::string FormatNumber(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

std::string CellName(const std::string& mechanism, int dim, double epsilon) {
  return mechanism + "_d" + std::to_string(dim) + "_e" + FormatNumber(epsilon);
}

// Stable per-cell RNG tag: independent of grid enumeration order, so adding
// a mechanism or dimension never changes another cell's outputs.
uint64_t CellTag(const std::string& mechanism, int dim, double epsilon) {
  const std::string key = CellName(mechanism, dim, epsilon);
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic indexed parallel map; each index writes only its own slot,
// so the result is identical for any thread count.
template <typename Fn>
void ParallelFor(size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  size_t worker_count = threads > 0
                            ? static_cast<size_t>(threads)
                            : std::max(1u, std::thread::hardware_concurrency());
  worker_count = std::min(worker_count, n);
  if (worker_count <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  workers.reserve(worker_count);
  for (size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (error) std::rethrow_exception(error);
}

void WritePerturbedCorpus(const fs::path& path, const Corpus& original,
                          const std::vector<std::vector<std::string>>& docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (size_t d = 0; d < docs.size(); ++d) {
    out << original.documents[d].id << '\t' << original.documents[d].label
        << '\t';
    for (size_t i = 0; i < docs[d].size(); ++i) {
      if (i > 0) out << ' ';
      out << docs[d][i];
    }
    out << '\n';
  }
}

void WritePdReport(const fs::path& path, const PdReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "word,n_w,s_w\n";
  out << std::fixed << std::setprecision(4);
  for (const PdProbe& probe : report.probes) {
    out << CsvEscape(probe.word) << ',' << probe.n_w << ',' << probe.s_w
        << '\n';
  }
  out << "MEAN," << report.mean_n_w << ',' << report.mean_s_w << '\n';
}

}  // namespace

ExperimentConfig ExperimentConfig::FromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig config;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
    size_t begin = 0;
    while (begin < line.size() && is_space(line[begin])) ++begin;
    size_t end = line.size();
    while (end > begin && is_space(line[end - 1])) --end;
    if (begin == end) continue;
    const std::string entry = line.substr(begin, end - begin);
    const size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    std::string key = entry.substr(0, eq);
    std::string value = entry.substr(eq + 1);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    size_t vbegin = 0;
    while (vbegin < value.size() && is_space(value[vbegin])) ++vbegin;
    value.erase(0, vbegin);
    try {
      config.Set(key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return config;
}

void ExperimentConfig::Set(const std::string& key, const std::string& value) {
  if (key == "dataset") {
    dataset_path = value;
  } else if (key == "dataset_format") {
    if (value == "csv") {
      dataset_format = DatasetFormat::kCsvWithLabel;
    } else if (value == "lines") {
      dataset_format = DatasetFormat::kPlainLines;
    } else {
      throw std::invalid_argument("dataset_format must be 'csv' or 'lines'");
    }
  } else if (key.rfind("embedding.", 0) == 0) {
    const int dim =
        static_cast<int>(ParseInt(key.substr(strlen("embedding.")), key));
    if (dim < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    embeddings[dim] = value;
  } else if (key == "mechanisms") {
    mechanisms.clear();
    for (const std::string& name : SplitCommaList(value)) {
      const auto kind = ParseMechanismName(name);
      if (!kind) throw std::invalid_argument("unknown mechanism '" + name + "'");
      mechanisms.push_back(*kind);
    }
  } else if (key == "epsilons") {
    epsilons.clear();
    for (const std::string& e : SplitCommaList(value)) {
      epsilons.push_back(ParseDouble(e, key));
    }
  } else if (key == "alphas") {
    alphas.clear();
    for (const std::string& a : SplitCommaList(value)) {
      alphas.push_back(ParseDouble(a, key));
    }
  } else if (key == "seed") {
    seed = static_cast<uint64_t>(ParseInt(value, key));
    seed_set = true;
  } else if (key == "output_dir") {
    output_dir = value;
  } else if (key == "oov_policy") {
    if (value == "passthrough") {
      oov_policy = OovPolicy::kPassThrough;
    } else if (value == "drop") {
      oov_policy = OovPolicy::kDrop;
    } else {
      throw std::invalid_argument("oov_policy must be 'passthrough' or 'drop'");
    }
  } else if (key == "probe_count") {
    probe_count = static_cast<int>(ParseInt(value, key));
  } else if (key == "trials") {
    trials = static_cast<int>(ParseInt(value, key));
  } else if (key == "lambda") {
    lambda = ParseDouble(value, key);
  } else if (key == "vickrey_t") {
    vickrey_t = ParseDouble(value, key);
  } else if (key == "gamma") {
    gamma = ParseDouble(value, key);
  } else if (key == "santext_topk") {
    santext_topk = static_cast<int>(ParseInt(value, key));
  } else if (key == "gumbel_b_override") {
    gumbel_b_override = ParseDouble(value, key);
  } else if (key == "synonym_lexicon") {
    synonym_lexicon_path = value;
  } else if (key == "accuracy_table") {
    accuracy_table_path = value;
  } else if (key == "wordlist") {
    wordlist_path = value;
  } else if (key == "token_map") {
    token_map_path = value;
  } else if (key == "stopwords") {
    stopwords_path = value;
  } else if (key == "sample_size") {
    sample_size = static_cast<size_t>(ParseInt(value, key));
  } else if (key == "threads") {
    threads = static_cast<int>(ParseInt(value, key));
  } else if (key == "exact_threshold") {
    exact_threshold = static_cast<size_t>(ParseInt(value, key));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::Validate() const {
  if (dataset_path.empty()) throw std::invalid_argument("config: dataset missing");
  if (embeddings.empty()) {
    throw std::invalid_argument("config: at least one embedding.<dim> required");
  }
  if (mechanisms.empty()) {
    throw std::invalid_argument("config: at least one mechanism required");
  }
  if (epsilons.empty()) {
    throw std::invalid_argument("config: at least one epsilon required");
  }
  if (!seed_set) throw std::invalid_argument("config: seed is mandatory");
  if (output_dir.empty()) {
    throw std::invalid_argument("config: output_dir missing");
  }
  if (probe_count < 1 || trials < 1) {
    throw std::invalid_argument("config: probe_count and trials must be >= 1");
  }
  const bool wants_syntf =
      std::find(mechanisms.begin(), mechanisms.end(), MechanismKind::kSynTF) !=
      mechanisms.end();
  if (wants_syntf && synonym_lexicon_path.empty()) {
    throw std::invalid_argument("config: syntf requires synonym_lexicon");
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::Snapshot()
    const {
  std::vector<std::pair<std::string, std::string>> snapshot;
  snapshot.emplace_back("dataset", dataset_path);
  snapshot.emplace_back("dataset_format",
                        dataset_format == DatasetFormat::kCsvWithLabel
                            ? "csv"
                            : "lines");
  for (const auto& [dim, path] : embeddings) {
    snapshot.emplace_back("embedding." + std::to_string(dim), path);
  }
  std::string mech_list;
  for (const auto kind : mechanisms) {
    if (!mech_list.empty()) mech_list += ',';
    mech_list += std::string(MechanismName(kind));
  }
  snapshot.emplace_back("mechanisms", mech_list);
  std::string eps_list;
  for (double e : epsilons) {
    if (!eps_list.empty()) eps_list += ',';
    eps_list += FormatNumber(e);
  }
  snapshot.emplace_back("epsilons", eps_list);
  std::string alpha_list;
  for (double a : alphas) {
    if (!alpha_list.empty()) alpha_list += ',';
    alpha_list += FormatNumber(a);
  }
  snapshot.emplace_back("alphas", alpha_list);
  snapshot.emplace_back("seed", std::to_string(seed));
  snapshot.emplace_back("output_dir", output_dir);
  snapshot.emplace_back("oov_policy", oov_policy == OovPolicy::kPassThrough
                                          ? "passthrough"
                                          : "drop");
  snapshot.emplace_back("probe_count", std::to_string(probe_count));
  snapshot.emplace_back("trials", std::to_string(trials));
  snapshot.emplace_back("lambda", FormatNumber(lambda));
  snapshot.emplace_back("vickrey_t", FormatNumber(vickrey_t));
  snapshot.emplace_back("gamma", FormatNumber(gamma));
  snapshot.emplace_back("santext_topk", std::to_string(santext_topk));
  if (gumbel_b_override) {
    snapshot.emplace_back("gumbel_b_override", FormatNumber(*gumbel_b_override));
  }
  if (!synonym_lexicon_path.empty()) {
    snapshot.emplace_back("synonym_lexicon", synonym_lexicon_path);
  }
  if (!accuracy_table_path.empty()) {
    snapshot.emplace_back("accuracy_table", accuracy_table_path);
  }
  if (!wordlist_path.empty()) snapshot.emplace_back("wordlist", wordlist_path);
  if (!token_map_path.empty()) snapshot.emplace_back("token_map", token_map_path);
  if (!stopwords_path.empty()) snapshot.emplace_back("stopwords", stopwords_path);
  if (sample_size) {
    snapshot.emplace_back("sample_size", std::to_string(*sample_size));
  }
  snapshot.emplace_back("threads", std::to_string(threads));
  snapshot.emplace_back("exact_threshold", std::to_string(exact_threshold));
  return snapshot;
}

AccuracyTable AccuracyTable::Load(const std::string& path) {
  const auto rows = ReadCsvFile(path);
  if (rows.size() < 2) {
    throw std::runtime_error("accuracy table has no data rows: " + path);
  }
  const std::vector<std::string> expected = {"mechanism", "dim", "epsilon",
                                             "accuracy", "baseline"};
  if (rows.front() != expected) {
    throw std::runtime_error(
        "accuracy table header must be mechanism,dim,epsilon,accuracy,baseline");
  }
  AccuracyTable table;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 5) {
      throw std::runtime_error("accuracy table row " + std::to_string(r + 1) +
                               ": expected 5 columns");
    }
    Entry entry;
    entry.accuracy = ParseDouble(row[3], "accuracy");
    entry.baseline = ParseDouble(row[4], "baseline");
    table.entries[{row[0], static_cast<int>(ParseInt(row[1], "dim")),
                   ParseDouble(row[2], "epsilon")}] = entry;
  }
  return table;
}

const AccuracyTable::Entry* AccuracyTable::Find(std::string_view mechanism,
                                                int dim, double epsilon) const {
  const auto it = entries.find({std::string(mechanism), dim, epsilon});
  if (it == entries.end()) return nullptr;
  return &it->second;
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();

  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir / "perturbed");
  fs::create_directories(out_dir / "pd");

  // Inputs shared across the whole grid.
  std::vector<std::string> stopword_storage;
  std::unordered_set<std::string_view> stopwords;
  if (!config.stopwords_path.empty()) {
    stopword_storage = LoadStopwordFile(config.stopwords_path);
    stopwords = StopwordSetFromLines(stopword_storage);
  } else {
    stopwords = DefaultStopwordSet();
  }
  TokenMap token_map;
  if (!config.token_map_path.empty()) {
    token_map = LoadTokenMap(config.token_map_path);
  }
  Corpus corpus = IngestDataset(config.dataset_path, config.dataset_format,
                                stopwords,
                                config.token_map_path.empty() ? nullptr
                                                              : &token_map);
  if (config.sample_size) {
    corpus = SampleCorpus(corpus, *config.sample_size, config.seed);
  }
  const std::vector<std::vector<std::string>> original_tokens =
      corpus.TokenView();

  std::optional<SynonymLexicon> lexicon;
  if (!config.synonym_lexicon_path.empty()) {
    lexicon = SynonymLexicon::Load(config.synonym_lexicon_path);
  }
  std::optional<AccuracyTable> accuracy;
  if (!config.accuracy_table_path.empty()) {
    accuracy = AccuracyTable::Load(config.accuracy_table_path);
  }
  std::optional<std::unordered_set<std::string>> wordlist;
  if (!config.wordlist_path.empty()) {
    wordlist = LoadWordList(config.wordlist_path);
  }

  const Rng master(config.seed);
  ExperimentResult result;
  result.output_dir = config.output_dir;

  nlohmann::json manifest;
  manifest["library_version"] = std::string(kLibraryVersion);
  manifest["seed"] = config.seed;
  {
    nlohmann::json snapshot = nlohmann::json::object();
    for (const auto& [key, value] : config.Snapshot()) snapshot[key] = value;
    manifest["config"] = snapshot;
  }
  manifest["preprocess_fingerprint"] = corpus.preprocess_fingerprint;
  {
    nlohmann::json digests = nlohmann::json::object();
    digests[config.dataset_path] = Sha256HexOfFile(config.dataset_path);
    for (const auto& [dim, path] : config.embeddings) {
      digests[path] = Sha256HexOfFile(path);
    }
    for (const std::string& path :
         {config.synonym_lexicon_path, config.accuracy_table_path,
          config.wordlist_path, config.token_map_path, config.stopwords_path}) {
      if (!path.empty()) digests[path] = Sha256HexOfFile(path);
    }
    manifest["input_digests"] = digests;
  }
  manifest["cells"] = nlohmann::json::array();

  std::vector<PucCell> puc_grid;

  for (const auto& [dim, embedding_path] : config.embeddings) {
    const EmbeddingStore store =
        EmbeddingStore::Load(embedding_path, dim);

    // Geometry is only needed by Mahalanobis (covariance factor) and
    // Gumbel (distance extremes); skip the O(|W|^2) pass otherwise.
    std::optional<GeometryStats> geometry;
    const bool needs_geometry =
        std::any_of(config.mechanisms.begin(), config.mechanisms.end(),
                    [](MechanismKind k) {
                      return k == MechanismKind::kMahalanobis ||
                             k == MechanismKind::kGumbel;
                    });
    std::string geometry_error;
    if (needs_geometry) {
      try {
        geometry =
            ComputeGeometryStats(store, config.lambda, config.exact_threshold);
      } catch (const std::exception& e) {
        geometry_error = e.what();
      }
    }

    // Unique in-vocabulary dataset tokens, in first-appearance order, as the
    // plausible-deniability probe pool.
    std::vector<std::string> pd_candidates;
    {
      std::unordered_set<std::string_view> seen;
      for (const auto& doc : corpus.documents) {
        for (const auto& token : doc.tokens) {
          if (store.Contains(token) && seen.insert(token).second) {
            pd_candidates.push_back(token);
          }
        }
      }
    }

    const MeanWordVectorEmbedder embedder(store);

    for (const MechanismKind kind : config.mechanisms) {
      for (const double epsilon : config.epsilons) {
        CellResult cell;
        cell.mechanism = std::string(MechanismName(kind));
        cell.dim = dim;
        cell.epsilon = epsilon;
        const std::string cell_name = CellName(cell.mechanism, dim, epsilon);
        const auto start = std::chrono::steady_clock::now();
        try {
          MechanismConfig mc;
          mc.kind = kind;
          mc.epsilon = epsilon;
          mc.lambda = config.lambda;
          mc.vickrey_t = config.vickrey_t;
          mc.gamma = config.gamma;
          mc.santext_topk = config.santext_topk;
          mc.gumbel_b_override = config.gumbel_b_override;
          if ((kind == MechanismKind::kMahalanobis ||
               kind == MechanismKind::kGumbel) &&
              !geometry && !geometry_error.empty()) {
            throw std::runtime_error(geometry_error);
          }
          const std::unique_ptr<WordMechanism> mechanism = CreateMechanism(
              mc, &store, lexicon ? &*lexicon : nullptr,
              geometry ? &*geometry : nullptr);

          const Rng cell_rng =
              master.Substream(CellTag(cell.mechanism, dim, epsilon));

          // Token-independent perturbation; substream (cell, doc, token).
          std::vector<std::vector<std::string>> perturbed(
              corpus.documents.size());
          ParallelFor(corpus.documents.size(), config.threads, [&](size_t d) {
            perturbed[d] =
                PerturbDocument(corpus.documents[d].tokens, *mechanism,
                                config.oov_policy, cell_rng.Substream(d));
          });

          size_t total_tokens = 0;
          size_t oov_tokens = 0;
          for (const auto& doc : corpus.documents) {
            for (const auto& token : doc.tokens) {
              ++total_tokens;
              if (!mechanism->InVocabulary(token)) ++oov_tokens;
            }
          }
          cell.oov_rate = total_tokens == 0
                              ? 0.0
                              : 100.0 * static_cast<double>(oov_tokens) /
                                    static_cast<double>(total_tokens);

          WritePerturbedCorpus(out_dir / "perturbed" / (cell_name + ".txt"),
                               corpus, perturbed);

          if (config.oov_policy == OovPolicy::kPassThrough) {
            cell.pp = PerturbationPercentage(original_tokens, perturbed);
          } else {
            cell.pp = -1.0;  // undefined without token alignment
          }
          cell.cs =
              CosineSimilarityScore(original_tokens, perturbed, embedder);
          cell.low = LowRetention(original_tokens, perturbed);
          if (wordlist) {
            cell.english_pct = EnglishWordPct(perturbed, *wordlist);
          }

          if (pd_candidates.empty()) {
            throw std::runtime_error(
                "no in-vocabulary dataset tokens to probe");
          }
          const PdReport pd = EstimatePlausibleDeniability(
              *mechanism, pd_candidates, config.probe_count, config.trials,
              cell_rng.Substream(0x9d7));
          cell.n_w = pd.mean_n_w;
          cell.s_w = pd.mean_s_w;
          WritePdReport(out_dir / "pd" / (cell_name + ".csv"), pd);

          cell.ok = true;
        } catch (const std::exception& e) {
          cell.ok = false;
          cell.error = e.what();
        }
        cell.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();

        if (cell.ok && accuracy) {
          if (const auto* acc = accuracy->Find(cell.mechanism, dim, epsilon)) {
            PucCell puc_cell;
            puc_cell.mechanism = cell.mechanism;
            puc_cell.dim = dim;
            puc_cell.epsilon = epsilon;
            puc_cell.input.acc = acc->accuracy;
            puc_cell.input.baseline_acc = acc->baseline;
            puc_cell.input.n_w = cell.n_w;
            puc_cell.input.s_w = cell.s_w;
            puc_cell.input.pp = std::max(cell.pp, 0.0);
            puc_cell.input.cs = cell.cs;
            puc_cell.input.low = cell.low;
            puc_grid.push_back(std::move(puc_cell));
          }
        }

        nlohmann::json cell_json;
        cell_json["mechanism"] = cell.mechanism;
        cell_json["dim"] = dim;
        cell_json["epsilon"] = epsilon;
        cell_json["ok"] = cell.ok;
        cell_json["wall_ms"] = cell.wall_ms;
        if (!cell.ok) cell_json["error"] = cell.error;
        manifest["cells"].push_back(cell_json);
        result.cells.push_back(std::move(cell));
      }
    }
  }

  // Combined metrics table, one row per attempted cell.
  {
    std::ofstream out(out_dir / "metrics.csv", std::ios::binary);
    out << "mechanism,dim,epsilon,status,n_w,s_w,pp,cs,low,english_pct,"
           "oov_rate,error\n";
    for (const CellResult& cell : result.cells) {
      out << cell.mechanism << ',' << cell.dim << ','
          << FormatNumber(cell.epsilon) << ',' << (cell.ok ? "ok" : "error")
          << ',' << std::fixed << std::setprecision(4);
      if (cell.ok) {
        out << cell.n_w << ',' << cell.s_w << ',' << cell.pp << ',' << cell.cs
            << ',' << cell.low << ',';
        if (cell.english_pct) {
          out << *cell.english_pct;
        }
        out << ',' << cell.oov_rate << ',';
      } else {
        out << ",,,,,,,";
      }
      out << CsvEscape(cell.error) << '\n';
    }
  }

  if (accuracy) {
    for (const double alpha : config.alphas) {
      const std::array<double, 1> one_alpha{alpha};
      const PucTable table = BuildPucTable(puc_grid, one_alpha);
      std::ofstream out(
          out_dir / ("puc_alpha_" + FormatNumber(alpha) + ".csv"),
          std::ios::binary);
      out << RenderPucCsv(table);
    }
  }

  // Grid regression: CS explained by (epsilon, N_w, S_w, PP).
  {
    std::vector<const CellResult*> ok_cells;
    for (const CellResult& cell : result.cells) {
      if (cell.ok && cell.pp >= 0.0) ok_cells.push_back(&cell);
    }
    if (ok_cells.size() >= 6) {
      Eigen::MatrixXd predictors(ok_cells.size(), 4);
      Eigen::VectorXd response(ok_cells.size());
      for (size_t i = 0; i < ok_cells.size(); ++i) {
        predictors(static_cast<Eigen::Index>(i), 0) = ok_cells[i]->epsilon;
        predictors(static_cast<Eigen::Index>(i), 1) = ok_cells[i]->n_w;
        predictors(static_cast<Eigen::Index>(i), 2) = ok_cells[i]->s_w;
        predictors(static_cast<Eigen::Index>(i), 3) = ok_cells[i]->pp;
        response[static_cast<Eigen::Index>(i)] = ok_cells[i]->cs;
      }
      try {
        const RegressionReport report = OlsFit(
            predictors, response, {"epsilon", "n_w", "s_w", "pp"});
        std::ofstream text(out_dir / "regression.txt", std::ios::binary);
        text << report.ToText();
        std::ofstream csv(out_dir / "regression.csv", std::ios::binary);
        csv << "term,coef,std_err,t,p\n" << std::setprecision(10);
        for (size_t j = 0; j < report.names.size(); ++j) {
          const auto idx = static_cast<Eigen::Index>(j);
          csv << report.names[j] << ',' << report.coefficients[idx] << ','
              << report.standard_errors[idx] << ',' << report.t_values[idx]
              << ',' << report.p_values[idx] << '\n';
        }
        manifest["regression_r_squared"] = report.r_squared;
      } catch (const std::exception& e) {
        manifest["regression_error"] = e.what();
      }
    }
  }

  result.all_ok = std::all_of(result.cells.begin(), result.cells.end(),
                              [](const CellResult& c) { return c.ok; });
  manifest["all_ok"] = result.all_ok;
  {
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
  }
  return result;
}

}  // namespace mldp
