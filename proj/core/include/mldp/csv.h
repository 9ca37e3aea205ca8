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

#ifndef MLDP_CSV_H_
#define MLDP_CSV_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace mldp {

// Minimal RFC-4180 reader: quoted fields, doubled-quote escapes, embedded
// commas and newlines. Rows may differ in width; the caller validates.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // nullopt at end of input. Throws std::runtime_error on unbalanced quotes.
  std::optional<std::vector<std::string>> NextRow();

 private:
  std::istream& in_;
  size_t row_number_ = 0;
};

std::vector<std::vector<std::string>> ReadCsvFile(const std::string& path);

// Quotes a field iff it contains a comma, quote or newline.
std::string CsvEscape(const std::string& field);

}  // namespace mldp

#endif  // MLDP_CSV_H_
