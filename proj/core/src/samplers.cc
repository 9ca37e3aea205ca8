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

#include "mldp/samplers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mldp {
namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

Eigen::VectorXd UniformUnitVector(int dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  double norm2;
  do {
    for (int i = 0; i < dim; ++i) v[i] = rng.Gaussian();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

}  // namespace

void NoiseParams::Validate() const {
  if (!(epsilon > 0)) {
    throw std::invalid_argument("NoiseParams: epsilon must be positive, got " +
                                std::to_string(epsilon));
  }
  if (dim < 1) {
    throw std::invalid_argument("NoiseParams: dim must be >= 1, got " +
                                std::to_string(dim));
  }
  if (chol.has_value() != lambda.has_value()) {
    throw std::invalid_argument(
        "NoiseParams: chol and lambda must be supplied together");
  }
  if (chol && (chol->rows() != dim || chol->cols() != dim)) {
    throw std::invalid_argument("NoiseParams: chol must be dim x dim");
  }
  if (lambda && !(*lambda >= 0.0 && *lambda <= 1.0)) {
    throw std::invalid_argument("NoiseParams: lambda must be in [0, 1]");
  }
}

double SampleGamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0) || !(scale > 0)) {
    throw std::invalid_argument("SampleGamma: shape and scale must be > 0");
  }
  // Marsaglia-Tsang. Shapes below one are lifted with the U^{1/shape} boost.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(rng.Uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.Gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.Uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return boost * d * v * scale;
    }
  }
}

Eigen::VectorXd SampleSphericalLaplace(const NoiseParams& params, Rng& rng) {
  params.Validate();
  const Eigen::VectorXd direction = UniformUnitVector(params.dim, rng);
  const double radius =
      SampleGamma(static_cast<double>(params.dim), 1.0 / params.epsilon, rng);
  return radius * direction;
}

Eigen::VectorXd SampleMahalanobis(const NoiseParams& params, Rng& rng) {
  params.Validate();
  if (!params.chol) {
    throw std::invalid_argument("SampleMahalanobis: missing Mahalanobis factor");
  }
  return *params.chol * SampleSphericalLaplace(params, rng);
}

double SampleGumbel(double mu, double b, Rng& rng) {
  if (!(b > 0)) throw std::invalid_argument("SampleGumbel: scale must be > 0");
  return mu - b * std::log(-std::log(rng.Uniform()));
}

double SampleTruncatedGumbel(double mu, double b, double upper, Rng& rng) {
  if (!(b > 0)) {
    throw std::invalid_argument("SampleTruncatedGumbel: scale must be > 0");
  }
  if (std::isnan(upper) || upper == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument(
        "SampleTruncatedGumbel: upper bound must be finite or +infinity");
  }
  // F(x) = exp(-exp(-(x - mu)/b)); invert U * F(upper) for U in (0,1).
  const double u = rng.Uniform();
  if (upper == std::numeric_limits<double>::infinity()) {
    return mu - b * std::log(-std::log(u));
  }
  const double log_f_upper = -std::exp(-(upper - mu) / b);
  return mu - b * std::log(-(std::log(u) + log_f_upper));
}

int64_t SampleTruncatedPoisson(double mean, int64_t lo, int64_t hi, Rng& rng) {
  if (!(mean > 0)) {
    throw std::invalid_argument("SampleTruncatedPoisson: mean must be > 0");
  }
  if (lo > hi || lo < 0) {
    throw std::invalid_argument("SampleTruncatedPoisson: need 0 <= lo <= hi");
  }
  if (lo == hi) return lo;
  const double limit = std::exp(-mean);
  constexpr int kMaxAttempts = 1 << 20;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // Knuth's product-of-uniforms Poisson; mean here is log-vocabulary
    // sized, so the inner loop stays short.
    int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= rng.Uniform();
    } while (p > limit);
    --k;
    if (k >= lo && k <= hi) return k;
  }
  throw std::runtime_error(
      "SampleTruncatedPoisson: acceptance region too unlikely");
}

double LambertW0(double x) {
  if (std::isnan(x) || x < -kInvE - 1e-12) {
    throw std::invalid_argument("LambertW0: x must be >= -1/e");
  }
  if (x == 0.0) return 0.0;
  if (x <= -kInvE) return -1.0;

  double w;
  if (x < -0.25) {
    // Series about the branch point x = -1/e.
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  } else if (x < 3.0) {
    w = x / (1.0 + x);
  } else {
    // Asymptotic guess; valid once log(log(x)) is tame (x >= 3).
    const double lx = std::log(x);
    const double llx = std::log(lx);
    w = lx - llx + llx / lx;
  }

  const double tolerance = 1e-13 * std::max(1.0, std::abs(x));
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= tolerance) break;
    const double fp = ew * (1.0 + w);
    const double fpp = ew * (2.0 + w);
    const double denom = fp - 0.5 * f * fpp / fp;
    const double next = w - f / denom;
    w = std::isfinite(next) ? next : -1.0 + 1e-9;
    if (w < -1.0) w = -1.0 + 1e-9;
  }
  return w;
}

size_t SampleExponentialMechanism(std::span<const double> utilities,
                                  double epsilon, Rng& rng) {
  if (utilities.empty()) {
    throw std::invalid_argument("SampleExponentialMechanism: no candidates");
  }
  if (!(epsilon >= 0)) {
    throw std::invalid_argument(
        "SampleExponentialMechanism: epsilon must be >= 0");
  }
  double max_utility = utilities[0];
  for (double u : utilities) {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw std::invalid_argument(
          "SampleExponentialMechanism: utilities must lie in [0, 1]");
    }
    max_utility = std::max(max_utility, u);
  }
  double total = 0.0;
  std::vector<double> weights(utilities.size());
  for (size_t i = 0; i < utilities.size(); ++i) {
    weights[i] = std::exp(0.5 * epsilon * (utilities[i] - max_utility));
    total += weights[i];
  }
  const double target = rng.Uniform() * total;
  double cumulative = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  return weights.size() - 1;
}

}  // namespace mldp
