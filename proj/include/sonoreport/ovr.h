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

#ifndef SONOREPORT_OVR_H_
#define SONOREPORT_OVR_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "sonoreport/svm.h"

namespace sonoreport {

// k calibrated binary SVMs, model i separating class i from the rest.
struct OvrModel {
  int num_classes = 0;
  std::vector<SvmModel> models;

  size_t dimension() const {
    return models.empty() ? 0 : models.front().dimension;
  }
  friend bool operator==(const OvrModel&, const OvrModel&) = default;
};

// Labels are class ids in [0, num_classes); every class must be present.
absl::StatusOr<OvrModel> TrainOvr(std::span<const FeatureVector> samples,
                                  std::span<const int> labels, int num_classes,
                                  const TrainConfig& config);

// Per-class calibrated scores normalised to sum to one.
absl::StatusOr<std::vector<double>> OvrScores(const OvrModel& model,
                                              std::span<const double> x);

absl::StatusOr<int> OvrPredict(const OvrModel& model,
                               std::span<const double> x);

// Index of the largest score; ties go to the lowest index.
int ArgmaxLowestId(std::span<const double> scores);

}  // namespace sonoreport

#endif  // SONOREPORT_OVR_H_
