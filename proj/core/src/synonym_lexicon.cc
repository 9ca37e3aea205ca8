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

#include "mldp/synonym_lexicon.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace mldp {
namespace {

RatedSynonym ParseSynonym(std::string_view field, size_t line_no) {
  RatedSynonym synonym;
  const size_t colon = field.rfind(':');
  std::string_view token = field;
  if (colon != std::string_view::npos && colon + 1 < field.size()) {
    std::string_view rating_text = field.substr(colon + 1);
    double rating = 0.0;
    const auto [ptr, ec] = std::from_chars(
        rating_text.data(), rating_text.data() + rating_text.size(), rating);
    if (ec == std::errc() && ptr == rating_text.data() + rating_text.size()) {
      if (!(rating >= 0.0 && rating <= 1.0)) {
        throw std::runtime_error("synonym lexicon line " +
                                 std::to_string(line_no) +
                                 ": rating outside [0, 1]");
      }
      synonym.rating = rating;
      token = field.substr(0, colon);
    }
  }
  if (token.empty()) {
    throw std::runtime_error("synonym lexicon line " + std::to_string(line_no) +
                             ": empty synonym");
  }
  synonym.token = std::string(token);
  return synonym;
}

}  // namespace

SynonymLexicon SynonymLexicon::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open synonym lexicon: " + path);
  }
  SynonymLexicon lexicon;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error("synonym lexicon line " +
                               std::to_string(line_no) +
                               ": expected 'token TAB synonyms'");
    }
    const std::string token = line.substr(0, tab);
    std::vector<RatedSynonym> synonyms;
    std::string_view rest = std::string_view(line).substr(tab + 1);
    size_t i = 0;
    while (i < rest.size()) {
      while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
      size_t start = i;
      while (i < rest.size() && rest[i] != ' ' && rest[i] != '\t') ++i;
      if (i > start) {
        synonyms.push_back(ParseSynonym(rest.substr(start, i - start), line_no));
      }
    }
    if (synonyms.empty()) {
      throw std::runtime_error("synonym lexicon line " +
                               std::to_string(line_no) +
                               ": token without synonyms");
    }
    lexicon.Add(token, std::move(synonyms));
  }
  return lexicon;
}

void SynonymLexicon::Add(const std::string& token,
                         std::vector<RatedSynonym> synonyms) {
  const bool has_self =
      std::any_of(synonyms.begin(), synonyms.end(),
                  [&](const RatedSynonym& s) { return s.token == token; });
  if (!has_self) {
    synonyms.push_back({token, 1.0});
  }
  for (const RatedSynonym& s : synonyms) {
    if (!(s.rating >= 0.0 && s.rating <= 1.0)) {
      throw std::invalid_argument("synonym rating outside [0, 1] for '" +
                                  token + "'");
    }
  }
  entries_[token] = std::move(synonyms);
}

const std::vector<RatedSynonym>* SynonymLexicon::Find(
    std::string_view token) const {
  const auto it = entries_.find(std::string(token));
  if (it == entries_.end()) return nullptr;
  return &it->second;
}

}  // namespace mldp
