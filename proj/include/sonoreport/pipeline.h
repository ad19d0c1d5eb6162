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

#ifndef SONOREPORT_PIPELINE_H_
#define SONOREPORT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sonoreport/case_record.h"
#include "sonoreport/fusion.h"
#include "sonoreport/model_io.h"
#include "sonoreport/report.h"

namespace sonoreport {

// The models behind one preliminary report.
struct ModelSet {
  SvmModel malignancy;
  SvmModel shape;
  OvrModel fused;
  // Hash of the serialized models; changes whenever any model does.
  std::string fingerprint;

  size_t dimension() const { return malignancy.dimension; }
};

// Needs exactly one artifact each for malignancy, shape and fused, all of
// the same dimension and calibrated.
absl::StatusOr<ModelSet> MakeModelSet(std::span<const ModelArtifact> artifacts);
absl::StatusOr<ModelSet> LoadModelSet(
    std::span<const std::filesystem::path> paths);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string Fnv1aHex(absl::string_view bytes);

struct CasePrediction {
  // Probability of malignancy. An "malignancy" external score, when present,
  // replaces the model's.
  double malignancy_score = 0.0;
  double oval_round_score = 0.0;
  Shape shape = Shape::kOvalRound;
  FusedPrediction fused;
};

absl::StatusOr<CasePrediction> PredictCase(const ModelSet& models,
                                           const CaseRecord& record);

// Prediction plus report assembly. A case still pending triage is treated
// as showing a lesion.
absl::StatusOr<PreliminaryReport> BuildPreliminary(
    const ModelSet& models, const CaseRecord& record, double threshold,
    std::optional<Verdict> doctor_override, int64_t now_ms);

}  // namespace sonoreport

#endif  // SONOREPORT_PIPELINE_H_
