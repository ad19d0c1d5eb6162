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

#ifndef SONOREPORT_SVM_H_
#define SONOREPORT_SVM_H_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sonoreport/calibration.h"
#include "sonoreport/case_record.h"
#include "sonoreport/kernel.h"

namespace sonoreport {

struct TrainConfig {
  KernelSpec kernel;
  // Box constraint.
  double c = 1.0;
  // KKT tolerance.
  double tol = 1e-3;
  // Iteration budget, in units of n pair updates.
  int max_passes = 200;
  // Multiplier on C keyed by label (+1/-1 for binary, class id for
  // one-vs-rest). When absent, C is scaled inversely to class frequency so
  // both sides of each binary problem carry equal total weight.
  std::optional<std::map<int, double>> class_weights;

  absl::Status Validate() const;
};

// Trained binary C-SVM: f(x) = sum_i coeffs_i K(sv_i, x) + bias, with
// coeffs_i = alpha_i y_i.
struct SvmModel {
  KernelSpec kernel;
  double c = 1.0;
  size_t dimension = 0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> coeffs;
  double bias = 0.0;
  std::optional<PlattCalibration> calibration;

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

// Trains on labels in {-1, +1}. Samples are put into a canonical order
// before solving, so the result does not depend on input order. Fits the
// logistic calibration on the training decision values.
absl::StatusOr<SvmModel> TrainSvm(std::span<const FeatureVector> samples,
                                  std::span<const int> labels,
                                  const TrainConfig& config);

// Same, with an explicit C multiplier per sample. Exposed for one-vs-rest.
absl::StatusOr<SvmModel> TrainSvmWeighted(
    std::span<const FeatureVector> samples, std::span<const int> labels,
    std::span<const double> c_multipliers, const TrainConfig& config);

absl::StatusOr<double> DecisionValue(const SvmModel& model,
                                     std::span<const double> x);

// Calibrated probability of the positive class. FailedPrecondition for an
// uncalibrated model.
absl::StatusOr<double> PredictScore(const SvmModel& model,
                                    std::span<const double> x);

}  // namespace sonoreport

#endif  // SONOREPORT_SVM_H_
