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

#ifndef MLDP_SYNONYM_LEXICON_H_
#define MLDP_SYNONYM_LEXICON_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mldp {

struct RatedSynonym {
  std::string token;
  double rating = 1.0;  // in [0, 1]
};

// Token -> rated synonym candidates. File format: UTF-8 lines
//   token TAB synonym[:rating] [synonym[:rating] ...]
// Ratings default to 1.0 when omitted. Every listed token also carries
// itself with rating 1.0, so its candidate list is never empty.
class SynonymLexicon {
 public:
  static SynonymLexicon Load(const std::string& path);
  SynonymLexicon() = default;

  void Add(const std::string& token, std::vector<RatedSynonym> synonyms);

  // nullptr when the token is not listed.
  const std::vector<RatedSynonym>* Find(std::string_view token) const;

  size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<RatedSynonym>> entries_;
};

}  // namespace mldp

#endif  // MLDP_SYNONYM_LEXICON_H_
