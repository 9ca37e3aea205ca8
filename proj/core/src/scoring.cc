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

#include "mldp/scoring.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mldp {
namespace {

void CheckPercent(double value, const char* name) {
  if (!(value >= 0.0 && value <= 100.0)) {
    throw std::invalid_argument(std::string("PUC input: ") + name +
                                " must lie in [0, 100], got " +
                                std::to_string(value));
  }
}

}  // namespace

void PucInput::Validate() const {
  if (!(baseline_acc > 0.0)) {
    throw std::invalid_argument("PUC input: baseline accuracy must be > 0");
  }
  CheckPercent(n_w, "n_w");
  CheckPercent(s_w, "s_w");
  CheckPercent(pp, "pp");
  CheckPercent(cs, "cs");
  CheckPercent(low, "low");
  if (!(acc >= 0.0)) {
    throw std::invalid_argument("PUC input: accuracy must be >= 0");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("PUC input: alpha must lie in [0, 1]");
  }
}

double PucScore(const PucInput& input) {
  input.Validate();
  const double utility = 100.0 * input.acc / input.baseline_acc;
  const double privacy = ((100.0 - input.n_w) + input.s_w + input.pp +
                          input.cs + (100.0 - input.low)) /
                         5.0;
  return input.alpha * utility + (1.0 - input.alpha) * privacy;
}

void PucGeneralInput::Validate() const {
  if (utilities.empty()) {
    throw std::invalid_argument("PUC input: empty utility set");
  }
  if (privacy_up.empty() && privacy_down.empty()) {
    throw std::invalid_argument("PUC input: empty privacy set");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("PUC input: alpha must lie in [0, 1]");
  }
  if (!(max_score > 0.0)) {
    throw std::invalid_argument("PUC input: max score must be > 0");
  }
  for (double p : privacy_up) {
    if (!(p >= 0.0 && p <= max_score)) {
      throw std::invalid_argument("PUC input: privacy metric outside [0, M]");
    }
  }
  for (double p : privacy_down) {
    if (!(p >= 0.0 && p <= max_score)) {
      throw std::invalid_argument("PUC input: privacy metric outside [0, M]");
    }
  }
}

double PucGeneral(const PucGeneralInput& input) {
  input.Validate();
  double utility_sum = 0.0;
  for (double u : input.utilities) utility_sum += u;
  double privacy_sum = 0.0;
  for (double p : input.privacy_up) privacy_sum += p;
  for (double p : input.privacy_down) privacy_sum += input.max_score - p;
  const double num_privacy =
      static_cast<double>(input.privacy_up.size() + input.privacy_down.size());
  return input.alpha * utility_sum /
             static_cast<double>(input.utilities.size()) +
         (1.0 - input.alpha) * privacy_sum / num_privacy;
}

PucTable BuildPucTable(std::span<const PucCell> grid,
                       std::span<const double> alphas) {
  PucTable table;
  // (mechanism, epsilon, alpha) -> accumulated values over dimensions
  std::map<std::tuple<std::string, double, double>, std::vector<double>> means;
  for (const PucCell& cell : grid) {
    for (double alpha : alphas) {
      PucInput input = cell.input;
      input.alpha = alpha;
      PucRow row;
      row.mechanism = cell.mechanism;
      row.dim = cell.dim;
      row.epsilon = cell.epsilon;
      row.alpha = alpha;
      row.puc = PucScore(input);
      means[{cell.mechanism, cell.epsilon, alpha}].push_back(row.puc);
      table.cells.push_back(std::move(row));
    }
  }
  for (const auto& [key, values] : means) {
    PucRow row;
    row.mechanism = std::get<0>(key);
    row.dim = 0;
    row.epsilon = std::get<1>(key);
    row.alpha = std::get<2>(key);
    double sum = 0.0;
    for (double v : values) sum += v;
    row.puc = sum / static_cast<double>(values.size());
    table.dimension_means.push_back(std::move(row));
  }
  return table;
}

std::string RenderPucCsv(const PucTable& table) {
  std::ostringstream out;
  out << "mechanism,dim,epsilon,alpha,puc\n";
  out << std::fixed << std::setprecision(4);
  for (const PucRow& row : table.cells) {
    out << row.mechanism << ',' << row.dim << ',' << row.epsilon << ','
        << row.alpha << ',' << row.puc << '\n';
  }
  for (const PucRow& row : table.dimension_means) {
    out << row.mechanism << ",mean," << row.epsilon << ',' << row.alpha << ','
        << row.puc << '\n';
  }
  return out.str();
}

std::string RenderPucText(const PucTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "mechanism" << std::right
      << std::setw(6) << "dim" << std::setw(10) << "epsilon" << std::setw(8)
      << "alpha" << std::setw(10) << "puc"
      << "\n";
  // Highest PUC per (dim, epsilon, alpha) group gets the marker.
  std::map<std::tuple<int, double, double>, double> best;
  for (const PucRow& row : table.cells) {
    auto& value = best[{row.dim, row.epsilon, row.alpha}];
    value = std::max(value, row.puc);
  }
  out << std::fixed << std::setprecision(2);
  for (const PucRow& row : table.cells) {
    const bool is_best = best[{row.dim, row.epsilon, row.alpha}] == row.puc;
    out << std::left << std::setw(14) << row.mechanism << std::right
        << std::setw(6) << row.dim << std::setw(10) << row.epsilon
        << std::setw(8) << row.alpha << std::setw(10) << row.puc
        << (is_best ? " *" : "") << "\n";
  }
  if (!table.dimension_means.empty()) {
    out << "\nmeans over dimensions\n";
    for (const PucRow& row : table.dimension_means) {
      out << std::left << std::setw(14) << row.mechanism << std::right
          << std::setw(6) << "-" << std::setw(10) << row.epsilon
          << std::setw(8) << row.alpha << std::setw(10) << row.puc << "\n";
    }
  }
  return out.str();
}

}  // namespace mldp
