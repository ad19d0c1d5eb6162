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

#include "sonoreport/case_record.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace sonoreport {

absl::Status ValidateFeatureVector(const FeatureVector& features,
                                   size_t expected_dim) {
  if (features.size() != expected_dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature dimension ", features.size(), " != expected ",
                     expected_dim));
  }
  for (size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features.values[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite feature value at index ", i));
    }
  }
  return absl::OkStatus();
}

absl::string_view LateralityName(Laterality laterality) {
  switch (laterality) {
    case Laterality::kUnspecified:
      return "unspecified";
    case Laterality::kLeft:
      return "left";
    case Laterality::kRight:
      return "right";
  }
  return "";
}

absl::StatusOr<Laterality> ParseLaterality(absl::string_view name) {
  if (name == "unspecified") return Laterality::kUnspecified;
  if (name == "left") return Laterality::kLeft;
  if (name == "right") return Laterality::kRight;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown laterality \"", name, "\""));
}

absl::string_view FeatureSourceName(FeatureSource source) {
  return source == FeatureSource::kSynthetic ? "synthetic"
                                             : "external_embedding";
}

absl::StatusOr<FeatureSource> ParseFeatureSource(absl::string_view name) {
  if (name == "synthetic") return FeatureSource::kSynthetic;
  if (name == "external_embedding") return FeatureSource::kExternalEmbedding;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown feature source \"", name, "\""));
}

absl::string_view TriageName(Triage triage) {
  switch (triage) {
    case Triage::kPending:
      return "pending";
    case Triage::kNormal:
      return "normal";
    case Triage::kLesion:
      return "lesion";
  }
  return "";
}

absl::StatusOr<Triage> ParseTriage(absl::string_view name) {
  if (name == "pending") return Triage::kPending;
  if (name == "normal") return Triage::kNormal;
  if (name == "lesion") return Triage::kLesion;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown triage \"", name, "\""));
}

absl::string_view ReviewStateName(ReviewState state) {
  switch (state) {
    case ReviewState::kUnreviewed:
      return "unreviewed";
    case ReviewState::kPreliminaryIssued:
      return "preliminary_issued";
    case ReviewState::kFinalized:
      return "finalized";
  }
  return "";
}

absl::StatusOr<ReviewState> ParseReviewState(absl::string_view name) {
  if (name == "unreviewed") return ReviewState::kUnreviewed;
  if (name == "preliminary_issued") return ReviewState::kPreliminaryIssued;
  if (name == "finalized") return ReviewState::kFinalized;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown review state \"", name, "\""));
}

absl::StatusOr<CaseRecord> ValidateCase(const RawCaseRecord& raw,
                                        size_t expected_dim) {
  if (raw.case_id.empty()) {
    return absl::InvalidArgumentError("case_id must be non-empty");
  }
  CaseRecord record;
  record.case_id = raw.case_id;

  absl::StatusOr<Laterality> laterality = ParseLaterality(raw.laterality);
  if (!laterality.ok()) return laterality.status();
  record.laterality = *laterality;

  absl::StatusOr<FeatureSource> source = ParseFeatureSource(raw.source);
  if (!source.ok()) return source.status();
  record.features = FeatureVector{raw.features, *source};
  if (absl::Status s = ValidateFeatureVector(record.features, expected_dim);
      !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("case ", raw.case_id, ": ", s.message()));
  }

  for (const auto& [key, score] : raw.external_scores) {
    if (key.empty()) {
      return absl::InvalidArgumentError("external score with empty key");
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("case ", raw.case_id, ": external score \"", key,
                       "\" = ", score, " outside [0, 1]"));
    }
  }
  record.external_scores = raw.external_scores;
  record.triage = Triage::kPending;
  record.review = ReviewState::kUnreviewed;
  record.version = 1;
  return record;
}

absl::StatusOr<CaseRecord> WithReview(const CaseRecord& record,
                                      ReviewState next) {
  const ReviewState current = record.review;
  const bool allowed =
      (current == ReviewState::kUnreviewed &&
       next == ReviewState::kPreliminaryIssued) ||
      (current == ReviewState::kPreliminaryIssued &&
       (next == ReviewState::kPreliminaryIssued ||
        next == ReviewState::kFinalized));
  if (!allowed) {
    return absl::FailedPreconditionError(absl::StrCat(
        "case ", record.case_id, ": review cannot move from ",
        ReviewStateName(current), " to ", ReviewStateName(next)));
  }
  CaseRecord out = record;
  out.review = next;
  ++out.version;
  return out;
}

absl::StatusOr<CaseRecord> WithTriage(const CaseRecord& record,
                                      Triage triage) {
  if (record.review == ReviewState::kFinalized) {
    return absl::FailedPreconditionError(
        absl::StrCat("case ", record.case_id, " is already finalized"));
  }
  CaseRecord out = record;
  out.triage = triage;
  ++out.version;
  return out;
}

absl::StatusOr<CaseRecord> WithLaterality(const CaseRecord& record,
                                          Laterality laterality) {
  if (record.review == ReviewState::kFinalized) {
    return absl::FailedPreconditionError(
        absl::StrCat("case ", record.case_id, " is already finalized"));
  }
  CaseRecord out = record;
  out.laterality = laterality;
  ++out.version;
  return out;
}

}  // namespace sonoreport
