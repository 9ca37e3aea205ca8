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

#ifndef MLDP_CORPUS_H_
#define MLDP_CORPUS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mldp {

struct Document {
  std::string id;
  std::string label;  // empty when the source carries no labels
  std::vector<std::string> tokens;
};

struct Corpus {
  std::vector<Document> documents;
  std::string source_path;
  std::string preprocess_fingerprint;  // digest of the effective token rules

  std::vector<std::vector<std::string>> TokenView() const;
};

// The pinned stopword list the preprocessing contract depends on. Negation
// words are deliberately absent so sentiment-bearing structure survives.
std::span<const std::string_view> BundledStopwords();

// Optional post-stopword token rewriting (e.g. a lemma table), loaded from
// lines "from TAB to".
using TokenMap = std::unordered_map<std::string, std::string>;
TokenMap LoadTokenMap(const std::string& path);

// Lowercases, strips every non-alphanumeric byte to a space, splits on
// whitespace, drops stopwords and purely numeric tokens, then applies the
// optional token map.
std::vector<std::string> Preprocess(
    std::string_view raw,
    const std::unordered_set<std::string_view>& stopwords,
    const TokenMap* token_map = nullptr);

std::unordered_set<std::string_view> DefaultStopwordSet();
// Stopwords from a newline-separated file; storage must outlive the set.
std::unordered_set<std::string_view> StopwordSetFromLines(
    std::span<const std::string> lines);
std::vector<std::string> LoadStopwordFile(const std::string& path);

enum class DatasetFormat {
  kCsvWithLabel,  // header row naming a "text" column and optional "label"
  kPlainLines,    // one document per line, no labels
};

// Reads and preprocesses a dataset. Document ids are the 0-based record
// index rendered in decimal.
Corpus IngestDataset(const std::string& path, DatasetFormat format,
                     const std::unordered_set<std::string_view>& stopwords,
                     const TokenMap* token_map = nullptr);

// Seeded uniform subsample (without replacement, original order preserved).
Corpus SampleCorpus(const Corpus& corpus, size_t size, uint64_t seed);

// Tokenized-corpus file format, used for perturbed outputs: one document
// per line, "id TAB label TAB token token ...".
void WriteTokenizedCorpus(const std::string& path, const Corpus& corpus);
Corpus ReadTokenizedCorpus(const std::string& path);

}  // namespace mldp

#endif  // MLDP_CORPUS_H_
