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

#include <cmath>

#include "gtest/gtest.h"
#include "mldp/rng.h"

namespace mldp {
namespace {

PucInput Anchor1() {
  // SynTF, sentiment task, d=50, eps=1, alpha=0.75.
  return {.acc = 72.58,
          .baseline_acc = 77.30,
          .n_w = 32.1,
          .s_w = 5.1,
          .pp = 70.5,
          .cs = 62.9,
          .low = 70.5,
          .alpha = 0.75};
}

PucInput Anchor2() {
  // TEM, sentiment task, d=50, eps=10, alpha=0.25.
  return {.acc = 76.30,
          .baseline_acc = 77.30,
          .n_w = 99.9,
          .s_w = 0.1,
          .pp = 0.1,
          .cs = 99.0,
          .low = 99.8,
          .alpha = 0.25};
}

TEST(PucScore, PublishedAnchors) {
  EXPECT_NEAR(PucScore(Anchor1()), 82.22, 0.01);
  EXPECT_NEAR(PucScore(Anchor2()), 39.60, 0.01);
}

TEST(PucScore, UtilityOnlyAtFullAlpha) {
  PucInput input = Anchor1();
  input.alpha = 1.0;
  input.acc = input.baseline_acc;
  EXPECT_DOUBLE_EQ(PucScore(input), 100.0);
  // At alpha = 1 privacy metrics must not matter.
  PucInput other = input;
  other.n_w = 0.0;
  other.s_w = 99.0;
  EXPECT_DOUBLE_EQ(PucScore(other), PucScore(input));
}

TEST(PucScore, PrivacyOnlyAtZeroAlpha) {
  PucInput input = Anchor1();
  input.alpha = 0.0;
  PucInput other = input;
  other.acc = 10.0;
  EXPECT_DOUBLE_EQ(PucScore(other), PucScore(input));
}

TEST(PucScore, UtilityAboveBaselineIsNotClamped) {
  PucInput input = Anchor1();
  input.alpha = 1.0;
  input.acc = input.baseline_acc * 1.1;
  EXPECT_NEAR(PucScore(input), 110.0, 1e-12);
}

TEST(PucScore, MonotoneInEachMetric) {
  const PucInput base = Anchor1();
  const double score = PucScore(base);
  PucInput up = base;
  up.acc += 1;
  EXPECT_GT(PucScore(up), score);
  up = base;
  up.s_w += 1;
  EXPECT_GT(PucScore(up), score);
  up = base;
  up.pp += 1;
  EXPECT_GT(PucScore(up), score);
  up = base;
  up.cs += 1;
  EXPECT_GT(PucScore(up), score);
  PucInput down = base;
  down.n_w += 1;
  EXPECT_LT(PucScore(down), score);
  down = base;
  down.low += 1;
  EXPECT_LT(PucScore(down), score);
}

TEST(PucScore, ValidatesInput) {
  PucInput input = Anchor1();
  input.baseline_acc = 0.0;
  EXPECT_THROW(PucScore(input), std::invalid_argument);
  input = Anchor1();
  input.n_w = 101.0;
  EXPECT_THROW(PucScore(input), std::invalid_argument);
  input = Anchor1();
  input.alpha = 1.5;
  EXPECT_THROW(PucScore(input), std::invalid_argument);
}

TEST(PucGeneral, SpecializesToTheConcreteFormula) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    PucInput input;
    input.acc = 100.0 * rng.Uniform();
    input.baseline_acc = 50.0 + 50.0 * rng.Uniform();
    input.n_w = 100.0 * rng.Uniform();
    input.s_w = 100.0 * rng.Uniform();
    input.pp = 100.0 * rng.Uniform();
    input.cs = 100.0 * rng.Uniform();
    input.low = 100.0 * rng.Uniform();
    input.alpha = rng.Uniform();

    PucGeneralInput general;
    general.utilities = {100.0 * input.acc / input.baseline_acc};
    general.privacy_up = {input.s_w, input.pp, input.cs};
    general.privacy_down = {input.n_w, input.low};
    general.alpha = input.alpha;
    general.max_score = 100.0;
    ASSERT_NEAR(PucGeneral(general), PucScore(input), 1e-12);
  }
}

TEST(PucGeneral, ExtremesAndAffinityInAlpha) {
  PucGeneralInput input;
  input.utilities = {42.0};
  input.privacy_up = {100.0};
  input.privacy_down = {0.0};
  input.alpha = 0.0;
  EXPECT_DOUBLE_EQ(PucGeneral(input), 100.0);

  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    PucGeneralInput random;
    random.utilities = {100.0 * rng.Uniform(), 100.0 * rng.Uniform()};
    random.privacy_up = {100.0 * rng.Uniform()};
    random.privacy_down = {100.0 * rng.Uniform(), 100.0 * rng.Uniform()};
    random.alpha = 0.0;
    const double at0 = PucGeneral(random);
    random.alpha = 1.0;
    const double at1 = PucGeneral(random);
    random.alpha = 0.5;
    ASSERT_NEAR(PucGeneral(random), 0.5 * (at0 + at1), 1e-12);
  }
}

TEST(PucGeneral, ValidatesSets) {
  PucGeneralInput input;
  input.privacy_up = {10.0};
  EXPECT_THROW(PucGeneral(input), std::invalid_argument);  // empty utilities
  input.utilities = {50.0};
  input.privacy_up.clear();
  EXPECT_THROW(PucGeneral(input), std::invalid_argument);  // empty privacy
  input.privacy_up = {150.0};
  EXPECT_THROW(PucGeneral(input), std::invalid_argument);  // outside [0, M]
}

TEST(PucTable, SingleCellMatchesPucScore) {
  PucCell cell;
  cell.mechanism = "tem";
  cell.dim = 50;
  cell.epsilon = 10.0;
  cell.input = Anchor2();
  const std::vector<double> alphas = {0.25};
  const PucTable table = BuildPucTable(std::vector<PucCell>{cell}, alphas);
  ASSERT_EQ(table.cells.size(), 1u);
  EXPECT_NEAR(table.cells[0].puc, 39.60, 0.01);
  ASSERT_EQ(table.dimension_means.size(), 1u);
  EXPECT_DOUBLE_EQ(table.dimension_means[0].puc, table.cells[0].puc);
}

TEST(PucTable, DimensionMeansMatchPublishedArithmetic) {
  // Gumbel sentiment eps=1 alpha=0.75 over d in {50, 100, 300}: published
  // cell values 89.64, 87.88, 87.14 average to 88.22.
  struct Row {
    int dim;
    double acc, base, n_w, s_w, pp, cs, low;
  };
  const std::vector<Row> rows = {
      {50, 78.08, 77.30, 23.6, 13.7, 76.6, 64.0, 53.1},
      {100, 78.43, 79.81, 28.0, 13.9, 73.0, 67.2, 42.6},
      {300, 81.64, 84.53, 31.7, 13.4, 69.5, 68.1, 25.2},
  };
  std::vector<PucCell> grid;
  for (const Row& row : rows) {
    PucCell cell;
    cell.mechanism = "gumbel";
    cell.dim = row.dim;
    cell.epsilon = 1.0;
    cell.input = {.acc = row.acc,
                  .baseline_acc = row.base,
                  .n_w = row.n_w,
                  .s_w = row.s_w,
                  .pp = row.pp,
                  .cs = row.cs,
                  .low = row.low,
                  .alpha = 0.75};
    grid.push_back(std::move(cell));
  }
  const std::vector<double> alphas = {0.75};
  const PucTable table = BuildPucTable(grid, alphas);
  ASSERT_EQ(table.dimension_means.size(), 1u);
  EXPECT_NEAR(table.dimension_means[0].puc, 88.22, 0.01);
}

TEST(PucTable, EmptyGridYieldsEmptyTable) {
  const std::vector<PucCell> grid;
  const std::vector<double> alphas = {0.5};
  const PucTable table = BuildPucTable(grid, alphas);
  EXPECT_TRUE(table.cells.empty());
  EXPECT_TRUE(table.dimension_means.empty());
  EXPECT_FALSE(RenderPucCsv(table).empty());  // header-only output
}

TEST(PucTable, TextRenderingMarksTheBestCell) {
  PucCell better;
  better.mechanism = "gumbel";
  better.dim = 50;
  better.epsilon = 1.0;
  better.input = Anchor1();
  PucCell worse = better;
  worse.mechanism = "cmp";
  worse.input.acc -= 20.0;
  const std::vector<double> alphas = {0.75};
  const PucTable table =
      BuildPucTable(std::vector<PucCell>{better, worse}, alphas);
  const std::string text = RenderPucText(table);
  const size_t gumbel_pos = text.find("gumbel");
  const size_t gumbel_eol = text.find('\n', gumbel_pos);
  EXPECT_NE(text.rfind('*', gumbel_eol), std::string::npos);
}

}  // namespace
}  // namespace mldp
