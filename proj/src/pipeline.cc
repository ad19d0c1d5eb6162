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

#include "sonoreport/pipeline.h"

#include <cstdio>
#include <map>

#include "absl/strings/str_cat.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

absl::Status RequireCalibrated(const SvmModel& model, absl::string_view what) {
  if (!model.calibration) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " model is not calibrated"));
  }
  return absl::OkStatus();
}

}  // namespace

std::string Fnv1aHex(absl::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

absl::StatusOr<ModelSet> MakeModelSet(
    std::span<const ModelArtifact> artifacts) {
  std::map<Target, const ModelArtifact*> by_target;
  for (const ModelArtifact& a : artifacts) {
    if (!by_target.emplace(a.target, &a).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("more than one ", TargetName(a.target), " model"));
    }
  }
  ModelSet set;
  std::string fingerprint_input;
  for (Target t : {Target::kMalignancy, Target::kShape, Target::kFused}) {
    auto it = by_target.find(t);
    if (it == by_target.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing ", TargetName(t), " model"));
    }
    absl::StrAppend(&fingerprint_input, SerializeModel(*it->second));
  }
  set.malignancy = std::get<SvmModel>(by_target[Target::kMalignancy]->model);
  set.shape = std::get<SvmModel>(by_target[Target::kShape]->model);
  set.fused = std::get<OvrModel>(by_target[Target::kFused]->model);
  RETURN_IF_ERROR(RequireCalibrated(set.malignancy, "malignancy"));
  RETURN_IF_ERROR(RequireCalibrated(set.shape, "shape"));
  for (const SvmModel& m : set.fused.models) {
    RETURN_IF_ERROR(RequireCalibrated(m, "fused"));
  }
  if (set.shape.dimension != set.malignancy.dimension ||
      set.fused.dimension() != set.malignancy.dimension) {
    return absl::InvalidArgumentError("models disagree on feature dimension");
  }
  set.fingerprint = Fnv1aHex(fingerprint_input);
  return set;
}

absl::StatusOr<ModelSet> LoadModelSet(
    std::span<const std::filesystem::path> paths) {
  std::vector<ModelArtifact> artifacts;
  for (const auto& path : paths) {
    ASSIGN_OR_RETURN(ModelArtifact artifact, LoadModel(path));
    artifacts.push_back(std::move(artifact));
  }
  return MakeModelSet(artifacts);
}

absl::StatusOr<CasePrediction> PredictCase(const ModelSet& models,
                                           const CaseRecord& record) {
  RETURN_IF_ERROR(ValidateFeatureVector(record.features, models.dimension()));
  const std::span<const double> x = record.features.values;
  double malignancy_score;
  if (auto it = record.external_scores.find("malignancy");
      it != record.external_scores.end()) {
    malignancy_score = it->second;
  } else {
    ASSIGN_OR_RETURN(malignancy_score, PredictScore(models.malignancy, x));
  }
  ASSIGN_OR_RETURN(double oval_round_score, PredictScore(models.shape, x));
  ASSIGN_OR_RETURN(FusedPrediction fused, PredictFused(models.fused, x));
  return CasePrediction{
      .malignancy_score = malignancy_score,
      .oval_round_score = oval_round_score,
      .shape = oval_round_score >= 0.5 ? Shape::kOvalRound : Shape::kIrregular,
      .fused = fused,
  };
}

absl::StatusOr<PreliminaryReport> BuildPreliminary(
    const ModelSet& models, const CaseRecord& record, double threshold,
    std::optional<Verdict> doctor_override, int64_t now_ms) {
  CaseRecord effective = record;
  if (effective.triage == Triage::kPending) effective.triage = Triage::kLesion;
  PreliminaryInputs inputs;
  inputs.threshold = threshold;
  inputs.doctor_override = doctor_override;
  inputs.now_ms = now_ms;
  if (effective.triage == Triage::kLesion) {
    ASSIGN_OR_RETURN(CasePrediction prediction, PredictCase(models, record));
    inputs.verdict_score = prediction.malignancy_score;
    inputs.shape = prediction.shape;
    inputs.fused = prediction.fused;
  }
  return GeneratePreliminary(effective, inputs);
}

}  // namespace sonoreport
