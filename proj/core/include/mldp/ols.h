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

#ifndef MLDP_OLS_H_
#define MLDP_OLS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mldp {

struct RegressionReport {
  std::vector<std::string> names;  // "const" followed by the predictor names
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd t_values;
  Eigen::VectorXd p_values;  // two-sided, Student-t with n - p dof
  double r_squared = 0.0;
  Eigen::Index n = 0;
  Eigen::Index dof = 0;
  Eigen::VectorXd residuals;

  std::string ToText() const;
};

// Ordinary least squares with an intercept prepended to `predictors`,
// solved through a column-pivoted QR decomposition. Standard errors come
// from sigma^2 (X^T X)^{-1}. Requires n >= p + 2 rows and a full-rank
// design; rank deficiency is reported with the offending column name.
RegressionReport OlsFit(const Eigen::MatrixXd& predictors,
                        const Eigen::VectorXd& response,
                        std::vector<std::string> predictor_names);

// Two-sided Student-t p-value via the regularized incomplete beta function
// (continued-fraction evaluation).
double StudentTwoSidedPValue(double t, double dof);

}  // namespace mldp

#endif  // MLDP_OLS_H_
