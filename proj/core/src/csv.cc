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

#include "mldp/csv.h"

#include <fstream>
#include <stdexcept>

namespace mldp {

std::optional<std::vector<std::string>> CsvReader::NextRow() {
  if (in_.peek() == std::istream::traits_type::eof()) return std::nullopt;
  ++row_number_;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (;;) {
    const int ci = in_.get();
    if (ci == std::istream::traits_type::eof()) {
      if (quoted) {
        throw std::runtime_error("csv row " + std::to_string(row_number_) +
                                 ": unterminated quoted field");
      }
      if (!any && field.empty() && row.empty()) return std::nullopt;
      row.push_back(std::move(field));
      return row;
    }
    const char c = static_cast<char>(ci);
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty()) {
          quoted = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        if (in_.peek() == '\n') in_.get();
        [[fallthrough]];
      case '\n':
        row.push_back(std::move(field));
        return row;
      default:
        field.push_back(c);
    }
  }
}

std::vector<std::vector<std::string>> ReadCsvFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open csv file: " + path);
  CsvReader reader(in);
  std::vector<std::vector<std::string>> rows;
  while (auto row = reader.NextRow()) {
    rows.push_back(std::move(*row));
  }
  return rows;
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace mldp
