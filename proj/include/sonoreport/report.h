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

#ifndef SONOREPORT_REPORT_H_
#define SONOREPORT_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sonoreport/case_record.h"
#include "sonoreport/fusion.h"
#include "sonoreport/lexicon.h"

namespace sonoreport {

inline constexpr double kDefaultThreshold = 0.5;

enum class Route { kNormalConclusion, kBenignAuto, kMalignantManual };
enum class Verdict { kNormal, kBenign, kMalignant };
// kManual marks a value the reviewer typed or changed.
enum class Provenance { kPredicted, kDefault, kManualPlaceholder, kManual };

absl::string_view RouteName(Route route);
absl::StatusOr<Route> ParseRoute(absl::string_view name);
absl::string_view VerdictName(Verdict verdict);
absl::StatusOr<Verdict> ParseVerdict(absl::string_view name);
absl::string_view ProvenanceName(Provenance provenance);
absl::StatusOr<Provenance> ParseProvenance(absl::string_view name);

struct ReportField {
  DescriptorField field;
  // Lexicon phrase, reviewer free text, or empty for a placeholder.
  std::string value;
  Provenance provenance;

  friend bool operator==(const ReportField&, const ReportField&) = default;
};

struct PreliminaryReport {
  std::string case_id;
  Laterality laterality = Laterality::kUnspecified;
  Route route = Route::kBenignAuto;
  // Probability of malignancy used for routing.
  double verdict_score = 0.0;
  std::vector<ReportField> fields;
  int64_t created_at_ms = 0;

  friend bool operator==(const PreliminaryReport&,
                         const PreliminaryReport&) = default;
};

struct EditLogEntry {
  DescriptorField field;
  std::string old_value;
  std::string new_value;
  int64_t timestamp_ms = 0;

  friend bool operator==(const EditLogEntry&, const EditLogEntry&) = default;
};

struct FinalReport {
  PreliminaryReport preliminary;
  Verdict verdict = Verdict::kBenign;
  Laterality laterality = Laterality::kUnspecified;
  std::vector<ReportField> fields;
  // One entry per field whose final value differs from the preliminary.
  std::vector<EditLogEntry> edit_log;
  std::string reviewer_id;
  int64_t base_version = 0;
  int64_t finalized_at_ms = 0;

  friend bool operator==(const FinalReport&, const FinalReport&) = default;
};

absl::Status ValidateThreshold(double threshold);

// An override always wins. Otherwise score >= threshold goes to manual
// review (ties included) and anything below is auto-described as benign.
// NormalConclusion is reachable only through an override.
Route TriageRoute(double verdict_score, double threshold,
                  std::optional<Verdict> doctor_override);

struct PreliminaryInputs {
  std::optional<Shape> shape;
  std::optional<FusedPrediction> fused;
  double verdict_score = 0.0;
  double threshold = kDefaultThreshold;
  std::optional<Verdict> doctor_override;
  int64_t now_ms = 0;
};

// If-then assembly. A case triaged Normal always yields a conclusion-only
// report. Benign-auto reports carry shape, internal echo and posterior
// acoustic as predicted plus boundary, orientation and margin at their
// benign defaults; malignant-manual reports carry six empty placeholders.
absl::StatusOr<PreliminaryReport> GeneratePreliminary(
    const CaseRecord& record, const PreliminaryInputs& inputs);

// Plain text, one field per line, "Conclusion:" last. Deterministic.
std::string RenderReport(const PreliminaryReport& report);
std::string RenderReport(const FinalReport& report);

// Recovers enumerated descriptor values from rendered text. Free-text and
// placeholder lines are skipped.
std::map<DescriptorField, DescriptorValue> ParseRenderedDescriptors(
    absl::string_view text);

struct ReviewSubmission {
  // Field name ("internal_echo") -> new value.
  std::map<std::string, std::string> edits;
  Verdict verdict = Verdict::kBenign;
  int64_t base_version = 0;
  std::string reviewer_id;
  std::optional<Laterality> laterality;
  int64_t now_ms = 0;
};

// Errors: Aborted on a stale base_version, InvalidArgument for unknown
// fields or missing mandatory manual fields, FailedPrecondition when the
// verdict does not fit the preliminary route. A benign-auto report
// confirmed malignant has every descriptor reset to a manual placeholder.
absl::StatusOr<FinalReport> ApplyReview(const PreliminaryReport& preliminary,
                                        const ReviewSubmission& submission,
                                        int64_t current_version);

}  // namespace sonoreport

#endif  // SONOREPORT_REPORT_H_
