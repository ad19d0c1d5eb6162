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

#ifndef SONOREPORT_CASE_RECORD_H_
#define SONOREPORT_CASE_RECORD_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace sonoreport {

enum class FeatureSource { kExternalEmbedding, kSynthetic };

// Lesion embedding produced upstream (deep feature extractor or the
// synthetic generator). Entries are finite and the length is fixed per
// dataset.
struct FeatureVector {
  std::vector<double> values;
  FeatureSource source = FeatureSource::kExternalEmbedding;

  size_t size() const { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

absl::Status ValidateFeatureVector(const FeatureVector& features,
                                   size_t expected_dim);

// Doctor-entered; never predicted.
enum class Laterality { kUnspecified, kLeft, kRight };
enum class Triage { kPending, kNormal, kLesion };
enum class ReviewState { kUnreviewed, kPreliminaryIssued, kFinalized };

absl::string_view LateralityName(Laterality laterality);
absl::StatusOr<Laterality> ParseLaterality(absl::string_view name);
absl::string_view FeatureSourceName(FeatureSource source);
absl::StatusOr<FeatureSource> ParseFeatureSource(absl::string_view name);
absl::string_view TriageName(Triage triage);
absl::StatusOr<Triage> ParseTriage(absl::string_view name);
absl::string_view ReviewStateName(ReviewState state);
absl::StatusOr<ReviewState> ParseReviewState(absl::string_view name);

// One screening image/lesion under review. `version` increases on every
// mutation; `review` only moves forward.
struct CaseRecord {
  std::string case_id;
  Laterality laterality = Laterality::kUnspecified;
  FeatureVector features;
  // Optional probabilities from external providers, keyed by descriptor
  // ("malignancy", "shape", ...).
  std::map<std::string, double> external_scores;
  Triage triage = Triage::kPending;
  ReviewState review = ReviewState::kUnreviewed;
  int64_t version = 1;

  friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

// Loosely typed record as it arrives from ingestion.
struct RawCaseRecord {
  std::string case_id;
  std::string laterality = "unspecified";
  std::vector<double> features;
  std::string source = "external_embedding";
  std::map<std::string, double> external_scores;
};

// Returns a v1, Pending, Unreviewed record or InvalidArgument.
absl::StatusOr<CaseRecord> ValidateCase(const RawCaseRecord& raw,
                                        size_t expected_dim);

// State transitions. Each returns the successor record with version + 1.
// Review may go Unreviewed -> PreliminaryIssued -> Finalized, and a
// preliminary may be re-issued; anything else is FailedPrecondition.
absl::StatusOr<CaseRecord> WithReview(const CaseRecord& record,
                                      ReviewState next);
absl::StatusOr<CaseRecord> WithTriage(const CaseRecord& record, Triage triage);
absl::StatusOr<CaseRecord> WithLaterality(const CaseRecord& record,
                                          Laterality laterality);

}  // namespace sonoreport

#endif  // SONOREPORT_CASE_RECORD_H_
