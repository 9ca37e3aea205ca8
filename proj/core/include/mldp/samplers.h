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
// Calibrated random primitives shared by the privatization mechanisms.
// Everything draws through an explicit Rng handle; there is no hidden state.

#ifndef MLDP_SAMPLERS_H_
#define MLDP_SAMPLERS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>

#include "mldp/rng.h"

namespace mldp {

struct NoiseParams {
  double epsilon = 1.0;
  int dim = 0;
  // Lower-triangular factor L with L L^T = lambda*Sigma + (1-lambda)*I.
  // Present iff lambda is present.
  std::optional<Eigen::MatrixXd> chol;
  std::optional<double> lambda;

  // Throws std::invalid_argument on violated invariants.
  void Validate() const;
};

// Gamma(shape, scale) via Marsaglia-Tsang squeeze rejection; valid for any
// real shape > 0, including non-integer values.
double SampleGamma(double shape, double scale, Rng& rng);

// Noise with density proportional to exp(-epsilon * ||z||): a uniform
// direction on the unit sphere scaled by a Gamma(dim, 1/epsilon) radius.
Eigen::VectorXd SampleSphericalLaplace(const NoiseParams& params, Rng& rng);

// Noise with density proportional to exp(-epsilon * ||z||_RM) where
// ||z||_RM = sqrt(z^T (lambda*Sigma + (1-lambda)*I)^{-1} z). Computed as
// L * Y with Y spherical-Laplace, so the pullback L^{-1} Z is spherical.
Eigen::VectorXd SampleMahalanobis(const NoiseParams& params, Rng& rng);

// Gumbel(mu, b) by inverse CDF: mu - b*log(-log(U)).
double SampleGumbel(double mu, double b, Rng& rng);

// Gumbel(mu, b) conditioned on the value being <= upper, by inverse CDF on
// the truncated range (no rejection loop). upper == +infinity degrades to
// SampleGumbel exactly (same uniform consumption).
double SampleTruncatedGumbel(double mu, double b, double upper, Rng& rng);

// Poisson(mean) conditioned on lo <= k <= hi, by rejection. lo == hi short
// circuits to lo.
int64_t SampleTruncatedPoisson(double mean, int64_t lo, int64_t hi, Rng& rng);

// Principal branch of the Lambert W function: the w >= -1 with w*e^w = x.
// Halley iteration refined until |w*e^w - x| <= 1e-12 * max(1, |x|).
// Requires x >= -1/e.
double LambertW0(double x);

// Exponential-mechanism draw over candidates with utilities in [0, 1]:
// index i is selected with probability proportional to
// exp(epsilon * utilities[i] / 2) (sensitivity 1).
size_t SampleExponentialMechanism(std::span<const double> utilities,
                                  double epsilon, Rng& rng);

}  // namespace mldp

#endif  // MLDP_SAMPLERS_H_
