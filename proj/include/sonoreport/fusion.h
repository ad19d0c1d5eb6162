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

#ifndef SONOREPORT_FUSION_H_
#define SONOREPORT_FUSION_H_

#include <array>
#include <span>
#include <utility>

#include "absl/status/statusor.h"
#include "sonoreport/fused_class.h"
#include "sonoreport/lexicon.h"
#include "sonoreport/ovr.h"

namespace sonoreport {

// Internal echo and posterior acoustic feature predicted jointly over the
// three admissible combinations, with the marginals read off the joint
// class.
struct FusedPrediction {
  FusedClass fused;
  InternalEcho internal_echo;
  PosteriorAcoustic posterior;
  // Indexed by FusedClass::index(); sums to one.
  std::array<double, FusedClass::kNumClasses> scores;
};

// (homogeneous, enhancement) has no fused class and is rejected.
absl::StatusOr<FusedClass> FuseLabels(InternalEcho echo,
                                      PosteriorAcoustic posterior);
std::pair<InternalEcho, PosteriorAcoustic> UnfuseLabels(FusedClass fused);

// Argmax (lowest class on ties) plus marginal read-out. Scores must be
// finite, non-negative and sum to one within 1e-9.
absl::StatusOr<FusedPrediction> FusedPredictionFromScores(
    std::span<const double> scores);

// `model` is a 3-class one-vs-rest model over FusedClass::index() ids.
absl::StatusOr<FusedPrediction> PredictFused(const OvrModel& model,
                                             std::span<const double> x);

}  // namespace sonoreport

#endif  // SONOREPORT_FUSION_H_
