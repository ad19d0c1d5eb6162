// Copyright 2026 The SonoReport Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sonoreport/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"

namespace sonoreport {
namespace {

constexpr int kMaxIterations = 100;
constexpr double kMinStep = 1e-10;
constexpr double kHessianRidge = 1e-12;
constexpr double kGradientEps = 1e-5;

// Negative log-likelihood of targets t under p = 1 / (1 + exp(z)) with
// z = A f + B, evaluated without overflow.
double NegLogLikelihood(std::span<const double> f,
                        const std::vector<double>& t, double a, double b) {
  double value = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double z = f[i] * a + b;
    if (z >= 0) {
      value += t[i] * z + std::log1p(std::exp(-z));
    } else {
      value += (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
  }
  return value;
}

}  // namespace

absl::StatusOr<PlattCalibration> FitPlatt(std::span<const double> decisions,
                                          std::span<const int> labels) {
  if (decisions.size() != labels.size() || decisions.empty()) {
    return absl::InvalidArgumentError(
        "calibration needs equal-length, non-empty inputs");
  }
  double prior_pos = 0.0;
  double prior_neg = 0.0;
  for (int label : labels) (label > 0 ? prior_pos : prior_neg) += 1.0;

  const double hi_target = (prior_pos + 1.0) / (prior_pos + 2.0);
  const double lo_target = 1.0 / (prior_neg + 2.0);
  std::vector<double> t(decisions.size());
  for (size_t i = 0; i < t.size(); ++i) {
    t[i] = labels[i] > 0 ? hi_target : lo_target;
  }

  // Internal parameterisation follows p = 1 / (1 + exp(A f + B)).
  double a = 0.0;
  double b = std::log((prior_neg + 1.0) / (prior_pos + 1.0));
  double fval = NegLogLikelihood(decisions, t, a, b);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double h11 = kHessianRidge;
    double h22 = kHessianRidge;
    double h21 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    for (size_t i = 0; i < decisions.size(); ++i) {
      const double f = decisions[i];
      const double z = f * a + b;
      double p;
      double q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += f * f * d2;
      h22 += d2;
      h21 += f * d2;
      const double d1 = t[i] - p;
      g1 += f * d1;
      g2 += d1;
    }
    if (std::fabs(g1) < kGradientEps && std::fabs(g2) < kGradientEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= kMinStep) {
      const double new_a = a + step * da;
      const double new_b = b + step * db;
      const double new_f = NegLogLikelihood(decisions, t, new_a, new_b);
      if (new_f < fval + 1e-4 * step * gd) {
        a = new_a;
        b = new_b;
        fval = new_f;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }

  PlattCalibration calibration;
  calibration.a = std::max(0.0, -a);
  calibration.c = -b;
  return calibration;
}

double PlattProbability(const PlattCalibration& calibration, double decision) {
  const double z = calibration.a * decision + calibration.c;
  double p;
  if (z >= 0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  constexpr double kLow = std::numeric_limits<double>::min();
  const double high = std::nextafter(1.0, 0.0);
  return std::clamp(p, kLow, high);
}

}  // namespace sonoreport
