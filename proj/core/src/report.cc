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

#include "mldp/report.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "mldp/csv.h"

namespace mldp {
namespace {

namespace fs = std::filesystem;

struct MetricsRow {
  std::string mechanism;
  std::string dim;
  std::string epsilon;
  bool ok = false;
  double n_w = 0, s_w = 0, pp = 0, cs = 0, low = 0;
  std::string error;
};

double ParseOr(const std::string& text, double fallback) {
  double v = fallback;
  std::from_chars(text.data(), text.data() + text.size(), v);
  return v;
}

void RenderMetrics(std::ostringstream& out, const std::vector<MetricsRow>& rows) {
  out << std::left << std::setw(14) << "mechanism" << std::right << std::setw(6)
      << "dim" << std::setw(9) << "eps" << std::setw(9) << "N_w" << std::setw(9)
      << "S_w" << std::setw(9) << "PP" << std::setw(9) << "CS" << std::setw(9)
      << "LOW" << "  status\n";
  // Highest per-(dim, epsilon) PP and CS get a marker, the way the published
  // tables bold per-setting maxima.
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> best;
  for (const MetricsRow& row : rows) {
    if (!row.ok) continue;
    auto& entry = best[{row.dim, row.epsilon}];
    entry.first = std::max(entry.first, row.pp);
    entry.second = std::max(entry.second, row.cs);
  }
  out << std::fixed << std::setprecision(2);
  for (const MetricsRow& row : rows) {
    out << std::left << std::setw(14) << row.mechanism << std::right
        << std::setw(6) << row.dim << std::setw(9) << row.epsilon;
    if (row.ok) {
      const auto& entry = best[{row.dim, row.epsilon}];
      out << std::setw(9) << row.n_w << std::setw(9) << row.s_w << std::setw(8)
          << row.pp << (row.pp == entry.first ? "*" : " ") << std::setw(8)
          << row.cs << (row.cs == entry.second ? "*" : " ") << std::setw(9)
          << row.low << "  ok\n";
    } else {
      out << std::setw(45) << ' ' << "  ERROR: " << row.error << "\n";
    }
  }
}

}  // namespace

std::string EmitReport(const std::string& output_dir) {
  std::ostringstream out;
  out << "== mldp experiment report ==\n";
  const fs::path dir(output_dir);

  const fs::path metrics_path = dir / "metrics.csv";
  std::vector<MetricsRow> rows;
  if (fs::exists(metrics_path)) {
    const auto csv_rows = ReadCsvFile(metrics_path.string());
    for (size_t r = 1; r < csv_rows.size(); ++r) {
      const auto& cells = csv_rows[r];
      if (cells.size() < 12) continue;
      MetricsRow row;
      row.mechanism = cells[0];
      row.dim = cells[1];
      row.epsilon = cells[2];
      row.ok = cells[3] == "ok";
      row.n_w = ParseOr(cells[4], 0);
      row.s_w = ParseOr(cells[5], 0);
      row.pp = ParseOr(cells[6], 0);
      row.cs = ParseOr(cells[7], 0);
      row.low = ParseOr(cells[8], 0);
      row.error = cells[11];
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) {
    out << "(no completed cells)\n";
  } else {
    out << "\nprivacy metrics\n";
    RenderMetrics(out, rows);
  }

  std::vector<fs::path> puc_files;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("puc_alpha_", 0) == 0 && name.ends_with(".csv")) {
        puc_files.push_back(entry.path());
      }
    }
  }
  std::sort(puc_files.begin(), puc_files.end());
  for (const fs::path& path : puc_files) {
    out << "\n" << path.filename().string() << "\n";
    const auto csv_rows = ReadCsvFile(path.string());
    struct PucLine {
      std::string mechanism, dim, epsilon;
      double puc;
    };
    std::vector<PucLine> lines;
    for (size_t r = 1; r < csv_rows.size(); ++r) {
      if (csv_rows[r].size() < 5) continue;
      lines.push_back({csv_rows[r][0], csv_rows[r][1], csv_rows[r][2],
                       ParseOr(csv_rows[r][4], 0)});
    }
    std::map<std::pair<std::string, std::string>, double> best;
    for (const PucLine& line : lines) {
      auto& value = best[{line.dim, line.epsilon}];
      value = std::max(value, line.puc);
    }
    out << std::left << std::setw(14) << "mechanism" << std::right
        << std::setw(6) << "dim" << std::setw(9) << "eps" << std::setw(10)
        << "PUC" << "\n"
        << std::fixed << std::setprecision(2);
    for (const PucLine& line : lines) {
      out << std::left << std::setw(14) << line.mechanism << std::right
          << std::setw(6) << line.dim << std::setw(9) << line.epsilon
          << std::setw(9) << line.puc
          << (best[{line.dim, line.epsilon}] == line.puc ? "*" : " ") << "\n";
    }
  }

  const std::string text = out.str();
  if (fs::exists(dir)) {
    std::ofstream file(dir / "report.txt", std::ios::binary);
    file << text;
  }
  return text;
}

}  // namespace mldp
