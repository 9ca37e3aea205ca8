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
// Privacy-Utility Composite scoring: the concrete five-metric formula, its
// generalized form, and grid aggregation for report tables.

#ifndef MLDP_SCORING_H_
#define MLDP_SCORING_H_

#include <span>
#include <string>
#include <vector>

namespace mldp {

struct PucInput {
  double acc = 0.0;           // accuracy % of a model on perturbed data
  double baseline_acc = 0.0;  // accuracy % on original data, > 0
  double n_w = 0.0;
  double s_w = 0.0;
  double pp = 0.0;
  double cs = 0.0;
  double low = 0.0;
  double alpha = 0.5;  // privacy-utility tuning parameter, in [0, 1]

  void Validate() const;  // throws std::invalid_argument
};

// alpha * (100*acc/baseline) +
//   (1-alpha) * [(100-n_w) + s_w + pp + cs + (100-low)] / 5.
// The utility term may exceed 100 when acc beats the baseline; the score is
// deliberately not clamped.
double PucScore(const PucInput& input);

struct PucGeneralInput {
  std::vector<double> utilities;     // already relative to a baseline
  std::vector<double> privacy_up;    // higher is better
  std::vector<double> privacy_down;  // lower is better
  double alpha = 0.5;
  double max_score = 100.0;

  void Validate() const;
};

// (alpha/|U|) * sum(U) +
//   ((1-alpha)/(|Pup|+|Pdown|)) * (sum(Pup) + sum(M - Pdown)).
double PucGeneral(const PucGeneralInput& input);

struct PucCell {
  std::string mechanism;
  int dim = 0;
  double epsilon = 0.0;
  PucInput input;  // its alpha field is ignored; alphas come per table
};

struct PucRow {
  std::string mechanism;
  int dim = 0;  // 0 in dimension-averaged rows
  double epsilon = 0.0;
  double alpha = 0.0;
  double puc = 0.0;
};

struct PucTable {
  std::vector<PucRow> cells;              // one row per (cell, alpha)
  std::vector<PucRow> dimension_means;    // per (mechanism, epsilon, alpha)
};

PucTable BuildPucTable(std::span<const PucCell> grid,
                       std::span<const double> alphas);

std::string RenderPucCsv(const PucTable& table);
// Aligned-text rendering; the best value per (dim, epsilon, alpha) group is
// marked with '*'.
std::string RenderPucText(const PucTable& table);

}  // namespace mldp

#endif  // MLDP_SCORING_H_
