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
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mldp {
namespace {

// Regularized incomplete beta I_x(a, b) by the Lentz continued fraction
// (Numerical Recipes betacf flavor), accurate to ~1e-14.
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

}  // namespace

double StudentTwoSidedPValue(double t, double dof) {
  if (dof <= 0) throw std::invalid_argument("StudentTwoSidedPValue: dof <= 0");
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return RegularizedIncompleteBeta(0.5 * dof, 0.5, x);
}

RegressionReport OlsFit(const Eigen::MatrixXd& predictors,
                        const Eigen::VectorXd& response,
                        std::vector<std::string> predictor_names) {
  const Eigen::Index n = predictors.rows();
  const Eigen::Index k = predictors.cols();
  if (static_cast<Eigen::Index>(predictor_names.size()) != k) {
    throw std::invalid_argument("OlsFit: one name per predictor column");
  }
  if (response.size() != n) {
    throw std::invalid_argument("OlsFit: response length mismatch");
  }
  const Eigen::Index p = k + 1;  // intercept included
  if (n < p + 1) {
    throw std::invalid_argument("OlsFit: need at least " +
                                std::to_string(p + 1) + " rows, got " +
                                std::to_string(n));
  }

  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  design.rightCols(k) = predictors;

  std::vector<std::string> names;
  names.reserve(p);
  names.emplace_back("const");
  for (auto& name : predictor_names) names.push_back(std::move(name));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    // The pivot permutation pushes dependent columns to the rear; the first
    // column beyond the numerical rank names the collinear culprit.
    const Eigen::Index culprit = qr.colsPermutation().indices()[qr.rank()];
    throw std::invalid_argument("OlsFit: design is rank deficient, column '" +
                                names[culprit] + "' is collinear");
  }

  RegressionReport report;
  report.names = std::move(names);
  report.n = n;
  report.dof = n - p;
  report.coefficients = qr.solve(response);
  const Eigen::VectorXd fitted = design * report.coefficients;
  report.residuals = response - fitted;

  const double ssr = report.residuals.squaredNorm();
  const double sigma2 = ssr / static_cast<double>(report.dof);
  const Eigen::MatrixXd xtx_inv =
      (design.transpose() * design).ldlt().solve(
          Eigen::MatrixXd::Identity(p, p));

  report.standard_errors.resize(p);
  report.t_values.resize(p);
  report.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
    report.standard_errors[j] = se;
    if (se > 0) {
      report.t_values[j] = report.coefficients[j] / se;
    } else {
      report.t_values[j] =
          report.coefficients[j] == 0.0
              ? 0.0
              : std::copysign(std::numeric_limits<double>::infinity(),
                              report.coefficients[j]);
    }
    report.p_values[j] = StudentTwoSidedPValue(
        report.t_values[j], static_cast<double>(report.dof));
  }

  const double mean_y = response.mean();
  const double sst = (response.array() - mean_y).square().sum();
  report.r_squared = sst > 0 ? 1.0 - ssr / sst : 1.0;
  return report;
}

std::string RegressionReport::ToText() const {
  std::ostringstream out;
  out << "R^2 = " << std::fixed << std::setprecision(4) << r_squared
      << "  (n = " << n << ", dof = " << dof << ")\n";
  out << std::setw(12) << "term" << std::setw(14) << "coef" << std::setw(12)
      << "std err" << std::setw(12) << "t" << std::setw(12) << "P>|t|"
      << "\n";
  for (size_t j = 0; j < names.size(); ++j) {
    out << std::setw(12) << names[j] << std::setprecision(4) << std::setw(14)
        << coefficients[static_cast<Eigen::Index>(j)] << std::setw(12)
        << standard_errors[static_cast<Eigen::Index>(j)] << std::setw(12)
        << t_values[static_cast<Eigen::Index>(j)] << std::setw(12)
        << p_values[static_cast<Eigen::Index>(j)] << "\n";
  }
  return out.str();
}

}  // namespace mldp
