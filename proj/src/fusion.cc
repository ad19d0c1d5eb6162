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

#include "sonoreport/fusion.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {

absl::StatusOr<FusedClass> FuseLabels(InternalEcho echo,
                                      PosteriorAcoustic posterior) {
  return FusedClass::FromBits(
      posterior == PosteriorAcoustic::kNoPosteriorFeatures,
      echo == InternalEcho::kAnechoic);
}

std::pair<InternalEcho, PosteriorAcoustic> UnfuseLabels(FusedClass fused) {
  return {fused.internal_echo(), fused.posterior()};
}

absl::StatusOr<FusedPrediction> FusedPredictionFromScores(
    std::span<const double> scores) {
  if (scores.size() != FusedClass::kNumClasses) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", FusedClass::kNumClasses, " scores, got ",
                     scores.size()));
  }
  double total = 0.0;
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) {
      return absl::InvalidArgumentError("fused scores must be finite and >= 0");
    }
    total += s;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("fused scores sum to ", total, ", expected 1"));
  }
  ASSIGN_OR_RETURN(FusedClass fused,
                   FusedClass::FromIndex(ArgmaxLowestId(scores)));
  FusedPrediction prediction{fused, fused.internal_echo(), fused.posterior(),
                             {}};
  for (int k = 0; k < FusedClass::kNumClasses; ++k) {
    prediction.scores[k] = scores[k];
  }
  return prediction;
}

absl::StatusOr<FusedPrediction> PredictFused(const OvrModel& model,
                                             std::span<const double> x) {
  if (model.num_classes != FusedClass::kNumClasses) {
    return absl::InvalidArgumentError(
        absl::StrCat("fusion model must have ", FusedClass::kNumClasses,
                     " classes, has ", model.num_classes));
  }
  ASSIGN_OR_RETURN(std::vector<double> scores, OvrScores(model, x));
  return FusedPredictionFromScores(scores);
}

}  // namespace sonoreport
