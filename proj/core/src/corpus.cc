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

#include "mldp/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mldp/csv.h"
#include "mldp/digest.h"
#include "mldp/rng.h"

namespace mldp {
namespace {

// Pinned list; results are relative to it, so it is versioned data, not a
// fetched resource. Negations (not, no, nor, never) are kept out of it.
constexpr std::string_view kStopwords[] = {
    "a",         "about",     "above",   "after",    "again",   "all",
    "am",        "an",        "and",     "any",      "are",     "as",
    "at",        "be",        "because", "been",     "before",  "being",
    "below",     "between",   "both",    "but",      "by",      "can",
    "could",     "did",       "do",      "does",     "doing",   "down",
    "during",    "each",      "few",     "for",      "from",    "further",
    "had",       "has",       "have",    "having",   "he",      "her",
    "here",      "hers",      "herself", "him",      "himself", "his",
    "how",       "i",         "if",      "in",       "into",    "is",
    "it",        "its",       "itself",  "just",     "me",      "more",
    "most",      "my",        "myself",  "of",       "off",     "on",
    "once",      "only",      "or",      "other",    "our",     "ours",
    "ourselves", "out",       "over",    "own",      "same",    "she",
    "should",    "so",        "some",    "such",     "than",    "that",
    "the",       "their",     "theirs",  "them",     "themselves",
    "then",      "there",     "these",   "they",     "this",    "those",
    "through",   "to",        "too",     "under",    "until",   "up",
    "very",      "was",       "we",      "were",     "what",    "when",
    "where",     "which",     "while",   "who",      "whom",    "why",
    "will",      "with",      "would",   "you",      "your",    "yours",
    "yourself",  "yourselves"};

bool IsNumericToken(std::string_view token) {
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !token.empty();
}

std::string PreprocessFingerprint(
    const std::unordered_set<std::string_view>& stopwords,
    const TokenMap* token_map) {
  std::vector<std::string_view> sorted(stopwords.begin(), stopwords.end());
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream canonical;
  canonical << "preprocess-v1;stopwords:";
  for (const auto& w : sorted) canonical << w << ',';
  canonical << ";map:";
  if (token_map != nullptr) {
    std::vector<std::pair<std::string, std::string>> pairs(token_map->begin(),
                                                           token_map->end());
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [from, to] : pairs) canonical << from << '>' << to << ',';
  }
  return Sha256Hex(canonical.str());
}

}  // namespace

std::vector<std::vector<std::string>> Corpus::TokenView() const {
  std::vector<std::vector<std::string>> view;
  view.reserve(documents.size());
  for (const Document& doc : documents) view.push_back(doc.tokens);
  return view;
}

std::span<const std::string_view> BundledStopwords() { return kStopwords; }

std::unordered_set<std::string_view> DefaultStopwordSet() {
  return {std::begin(kStopwords), std::end(kStopwords)};
}

std::unordered_set<std::string_view> StopwordSetFromLines(
    std::span<const std::string> lines) {
  std::unordered_set<std::string_view> set;
  for (const std::string& line : lines) {
    if (!line.empty()) set.insert(line);
  }
  return set;
}

std::vector<std::string> LoadStopwordFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

TokenMap LoadTokenMap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open token map: " + path);
  TokenMap map;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw std::runtime_error("token map line " + std::to_string(line_no) +
                               ": expected 'from TAB to'");
    }
    map[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return map;
}

std::vector<std::string> Preprocess(
    std::string_view raw,
    const std::unordered_set<std::string_view>& stopwords,
    const TokenMap* token_map) {
  std::string normalized;
  normalized.reserve(raw.size());
  for (char c : raw) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      normalized.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      normalized.push_back(' ');
    }
  }

  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && normalized[i] == ' ') ++i;
    size_t start = i;
    while (i < normalized.size() && normalized[i] != ' ') ++i;
    if (i == start) continue;
    std::string_view token(normalized.data() + start, i - start);
    if (stopwords.count(token) > 0) continue;
    if (IsNumericToken(token)) continue;
    std::string out(token);
    if (token_map != nullptr) {
      if (const auto it = token_map->find(out); it != token_map->end()) {
        out = it->second;
      }
    }
    tokens.push_back(std::move(out));
  }
  return tokens;
}

Corpus IngestDataset(const std::string& path, DatasetFormat format,
                     const std::unordered_set<std::string_view>& stopwords,
                     const TokenMap* token_map) {
  Corpus corpus;
  corpus.source_path = path;
  corpus.preprocess_fingerprint = PreprocessFingerprint(stopwords, token_map);

  if (format == DatasetFormat::kPlainLines) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    std::string line;
    size_t index = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      Document doc;
      doc.id = std::to_string(index++);
      doc.tokens = Preprocess(line, stopwords, token_map);
      corpus.documents.push_back(std::move(doc));
    }
    return corpus;
  }

  const auto rows = ReadCsvFile(path);
  if (rows.empty()) {
    throw std::runtime_error("dataset csv is empty: " + path);
  }
  const auto& header = rows.front();
  auto find_column = [&](std::string_view name) -> std::optional<size_t> {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto text_col = find_column("text");
  if (!text_col) {
    throw std::runtime_error("dataset csv is missing a 'text' column: " + path);
  }
  const auto label_col = find_column("label");
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= *text_col ||
        (label_col.has_value() && row.size() <= *label_col)) {
      throw std::runtime_error("dataset csv row " + std::to_string(r + 1) +
                               " is missing columns");
    }
    Document doc;
    doc.id = std::to_string(r - 1);
    if (label_col) doc.label = row[*label_col];
    doc.tokens = Preprocess(row[*text_col], stopwords, token_map);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void WriteTokenizedCorpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus: " + path);
  for (const Document& doc : corpus.documents) {
    out << doc.id << '\t' << doc.label << '\t';
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i > 0) out << ' ';
      out << doc.tokens[i];
    }
    out << '\n';
  }
}

Corpus ReadTokenizedCorpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  Corpus corpus;
  corpus.source_path = path;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t tab1 = line.find('\t');
    const size_t tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw std::runtime_error("corpus line " + std::to_string(line_no) +
                               ": expected 'id TAB label TAB tokens'");
    }
    Document doc;
    doc.id = line.substr(0, tab1);
    doc.label = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string_view rest = std::string_view(line).substr(tab2 + 1);
    size_t i = 0;
    while (i < rest.size()) {
      while (i < rest.size() && rest[i] == ' ') ++i;
      size_t start = i;
      while (i < rest.size() && rest[i] != ' ') ++i;
      if (i > start) doc.tokens.emplace_back(rest.substr(start, i - start));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus SampleCorpus(const Corpus& corpus, size_t size, uint64_t seed) {
  if (size >= corpus.documents.size()) return corpus;
  std::vector<size_t> indices(corpus.documents.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Rng rng(seed);
  for (size_t i = 0; i < size; ++i) {
    const size_t j = i + rng.Below(indices.size() - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(size);
  std::sort(indices.begin(), indices.end());
  Corpus sampled;
  sampled.source_path = corpus.source_path;
  sampled.preprocess_fingerprint = corpus.preprocess_fingerprint;
  sampled.documents.reserve(size);
  for (size_t index : indices) {
    sampled.documents.push_back(corpus.documents[index]);
  }
  return sampled;
}

}  // namespace mldp
