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

#ifndef SONOREPORT_CALIBRATION_H_
#define SONOREPORT_CALIBRATION_H_

#include <span>

#include "absl/status/statusor.h"

namespace sonoreport {

// Logistic map from decision value f to probability:
//   p = 1 / (1 + exp(-(a * f + c)))
struct PlattCalibration {
  double a = 1.0;
  double c = 0.0;

  friend bool operator==(const PlattCalibration&,
                         const PlattCalibration&) = default;
};

// Maximum-likelihood fit on (decision value, +/-1 label) pairs using damped
// Newton steps with backtracking, at most 100 iterations. Targets are
// smoothed toward the class priors (Platt's correction) so separable data
// yields a finite slope. The slope is floored at zero so the map stays
// nondecreasing.
absl::StatusOr<PlattCalibration> FitPlatt(std::span<const double> decisions,
                                          std::span<const int> labels);

// Always strictly inside (0, 1) for finite input.
double PlattProbability(const PlattCalibration& calibration, double decision);

}  // namespace sonoreport

#endif  // SONOREPORT_CALIBRATION_H_
