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

#include "mldp/ols.h"

#include <cmath>

#include "gtest/gtest.h"
#include "mldp/rng.h"

namespace mldp {
namespace {

TEST(StudentT, MatchesFrozenReferenceValues) {
  // Frozen survival-function values (two-sided).
  EXPECT_NEAR(StudentTwoSidedPValue(2.0, 10.0), 0.07338803477074039, 1e-10);
  EXPECT_NEAR(StudentTwoSidedPValue(3.5, 26.0), 0.0016962119809345528, 1e-10);
  EXPECT_NEAR(StudentTwoSidedPValue(0.0, 5.0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(
      StudentTwoSidedPValue(std::numeric_limits<double>::infinity(), 5.0), 0.0);
}

TEST(OlsFit, NoiselessLineIsRecoveredExactly) {
  const int n = 20;
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 0.3 * i - 2.0;
    y(i) = 2.0 + 3.0 * x(i, 0);
  }
  const RegressionReport report = OlsFit(x, y, {"x"});
  EXPECT_NEAR(report.coefficients[0], 2.0, 1e-10);
  EXPECT_NEAR(report.coefficients[1], 3.0, 1e-10);
  EXPECT_NEAR(report.r_squared, 1.0, 1e-12);
}

TEST(OlsFit, NoisyCoefficientsRecoveredWithinThreeStandardErrors) {
  const int n = 10000;
  Rng rng(12345);
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd y(n);
  const Eigen::Vector4d beta(0.7, -0.3, -0.2, -0.8);
  const double intercept = 120.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = 10.0 * rng.Uniform();
    y(i) = intercept + x.row(i).dot(beta) + 2.0 * rng.Gaussian();
  }
  const RegressionReport report = OlsFit(x, y, {"b1", "b2", "b3", "b4"});
  EXPECT_NEAR(report.coefficients[0], intercept,
              3 * report.standard_errors[0]);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(report.coefficients[j + 1], beta[j],
                3 * report.standard_errors[j + 1])
        << "beta" << j;
    EXPECT_LT(report.p_values[j + 1], 1e-6);
  }
}

TEST(OlsFit, ResidualsAreOrthogonalToDesign) {
  const int n = 500;
  Rng rng(9);
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.Gaussian();
    y(i) = 1.0 + x(i, 0) - 2.0 * x(i, 1) + 0.5 * rng.Gaussian();
  }
  const RegressionReport report = OlsFit(x, y, {"a", "b", "c"});
  Eigen::MatrixXd design(n, 4);
  design.col(0).setOnes();
  design.rightCols(3) = x;
  const Eigen::VectorXd xtr = design.transpose() * report.residuals;
  EXPECT_LE(xtr.cwiseAbs().maxCoeff(), 1e-8 * y.norm());

  // R^2 consistency with the residual norm.
  const double sst = (y.array() - y.mean()).square().sum();
  EXPECT_NEAR(report.r_squared, 1.0 - report.residuals.squaredNorm() / sst,
              1e-10);
}

TEST(OlsFit, RankDeficiencyNamesTheCollinearColumn) {
  const int n = 50;
  Rng rng(4);
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.Gaussian();
    x(i, 1) = 2.0 * x(i, 0);  // exactly collinear with column 0
    x(i, 2) = rng.Gaussian();
    y(i) = x(i, 0) + x(i, 2);
  }
  try {
    OlsFit(x, y, {"first", "double_first", "other"});
    FAIL() << "expected rank deficiency error";
  } catch (const std::invalid_argument& e) {
    const std::string message = e.what();
    EXPECT_NE(message.find("rank deficient"), std::string::npos);
    // One of the two dependent columns must be named.
    EXPECT_TRUE(message.find("first") != std::string::npos) << message;
  }
}

TEST(OlsFit, RequiresEnoughRows) {
  Eigen::MatrixXd x(3, 3);
  x.setRandom();
  Eigen::VectorXd y(3);
  y.setRandom();
  EXPECT_THROW(OlsFit(x, y, {"a", "b", "c"}), std::invalid_argument);
}

}  // namespace
}  // namespace mldp
