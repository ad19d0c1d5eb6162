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

#include "sonoreport/report.h"

#include <cmath>
#include <cstdio>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

std::string Term(const DescriptorValue& value) {
  return std::string(DescriptorTerm(value));
}

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  return buf;
}

void AppendFieldLines(const std::vector<ReportField>& fields,
                      std::string* out) {
  for (const ReportField& f : fields) {
    absl::StrAppend(out, FieldLabel(f.field), ": ");
    if (f.provenance == Provenance::kManualPlaceholder) {
      std::string prompt(FieldName(f.field));
      for (char& ch : prompt) {
        if (ch == '_') ch = ' ';
      }
      absl::StrAppend(out, "[enter ", prompt, "]\n");
    } else {
      absl::StrAppend(out, f.value, "\n");
    }
  }
}

void AppendHeader(absl::string_view kind, const std::string& case_id,
                  Laterality laterality, std::string* out) {
  absl::StrAppend(out, "Breast ultrasound report (", kind, ")\n");
  absl::StrAppend(out, "Case: ", case_id, "\n");
  if (laterality != Laterality::kUnspecified) {
    absl::StrAppend(out, "Laterality: ", LateralityName(laterality), "\n");
  }
}

}  // namespace

absl::string_view RouteName(Route route) {
  switch (route) {
    case Route::kNormalConclusion:
      return "normal_conclusion";
    case Route::kBenignAuto:
      return "benign_auto";
    case Route::kMalignantManual:
      return "malignant_manual";
  }
  return "";
}

absl::StatusOr<Route> ParseRoute(absl::string_view name) {
  if (name == "normal_conclusion") return Route::kNormalConclusion;
  if (name == "benign_auto") return Route::kBenignAuto;
  if (name == "malignant_manual") return Route::kMalignantManual;
  return absl::InvalidArgumentError(absl::StrCat("unknown route \"", name, "\""));
}

absl::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kNormal:
      return "normal";
    case Verdict::kBenign:
      return "benign";
    case Verdict::kMalignant:
      return "malignant";
  }
  return "";
}

absl::StatusOr<Verdict> ParseVerdict(absl::string_view name) {
  if (name == "normal") return Verdict::kNormal;
  if (name == "benign") return Verdict::kBenign;
  if (name == "malignant") return Verdict::kMalignant;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown verdict \"", name, "\""));
}

absl::string_view ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kPredicted:
      return "predicted";
    case Provenance::kDefault:
      return "default";
    case Provenance::kManualPlaceholder:
      return "manual_placeholder";
    case Provenance::kManual:
      return "manual";
  }
  return "";
}

absl::StatusOr<Provenance> ParseProvenance(absl::string_view name) {
  if (name == "predicted") return Provenance::kPredicted;
  if (name == "default") return Provenance::kDefault;
  if (name == "manual_placeholder") return Provenance::kManualPlaceholder;
  if (name == "manual") return Provenance::kManual;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown provenance \"", name, "\""));
}

absl::Status ValidateThreshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("threshold must lie in (0, 1), got ", threshold));
  }
  return absl::OkStatus();
}

Route TriageRoute(double verdict_score, double threshold,
                  std::optional<Verdict> doctor_override) {
  if (doctor_override) {
    switch (*doctor_override) {
      case Verdict::kNormal:
        return Route::kNormalConclusion;
      case Verdict::kBenign:
        return Route::kBenignAuto;
      case Verdict::kMalignant:
        return Route::kMalignantManual;
    }
  }
  return verdict_score >= threshold ? Route::kMalignantManual
                                    : Route::kBenignAuto;
}

absl::StatusOr<PreliminaryReport> GeneratePreliminary(
    const CaseRecord& record, const PreliminaryInputs& inputs) {
  if (record.review == ReviewState::kFinalized) {
    return absl::FailedPreconditionError(
        absl::StrCat("case ", record.case_id, " is already finalized"));
  }
  if (record.triage == Triage::kPending) {
    return absl::FailedPreconditionError(
        absl::StrCat("case ", record.case_id, " has not been triaged"));
  }
  RETURN_IF_ERROR(ValidateThreshold(inputs.threshold));
  if (!(inputs.verdict_score >= 0.0 && inputs.verdict_score <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("verdict score ", inputs.verdict_score,
                     " outside [0, 1]"));
  }

  PreliminaryReport report;
  report.case_id = record.case_id;
  report.laterality = record.laterality;
  report.verdict_score = inputs.verdict_score;
  report.created_at_ms = inputs.now_ms;
  report.route = record.triage == Triage::kNormal
                     ? Route::kNormalConclusion
                     : TriageRoute(inputs.verdict_score, inputs.threshold,
                                   inputs.doctor_override);

  switch (report.route) {
    case Route::kNormalConclusion:
      break;
    case Route::kBenignAuto: {
      if (!inputs.shape || !inputs.fused) {
        return absl::InvalidArgumentError(absl::StrCat(
            "case ", record.case_id,
            ": benign route needs shape and fused predictions"));
      }
      report.fields = {
          {DescriptorField::kShape, Term(*inputs.shape),
           Provenance::kPredicted},
          {DescriptorField::kInternalEcho, Term(inputs.fused->internal_echo),
           Provenance::kPredicted},
          {DescriptorField::kPosteriorAcoustic,
           Term(inputs.fused->posterior), Provenance::kPredicted},
          {DescriptorField::kBoundary, Term(Boundary::kAbrupt),
           Provenance::kDefault},
          {DescriptorField::kOrientation, Term(Orientation::kParallel),
           Provenance::kDefault},
          {DescriptorField::kMargin, Term(Margin::kCircumscribed),
           Provenance::kDefault},
      };
      break;
    }
    case Route::kMalignantManual:
      for (DescriptorField field : kAllDescriptorFields) {
        report.fields.push_back(
            {field, std::string(), Provenance::kManualPlaceholder});
      }
      break;
  }
  return report;
}

std::string RenderReport(const PreliminaryReport& report) {
  std::string out;
  AppendHeader("preliminary", report.case_id, report.laterality, &out);
  absl::StrAppend(&out, "Malignancy score: ", FormatScore(report.verdict_score),
                  "\n");
  AppendFieldLines(report.fields, &out);
  switch (report.route) {
    case Route::kNormalConclusion:
      absl::StrAppend(&out, "Conclusion: normal\n");
      break;
    case Route::kBenignAuto:
      absl::StrAppend(&out, "Conclusion: benign (AI preliminary)\n");
      break;
    case Route::kMalignantManual:
      absl::StrAppend(&out,
                      "Conclusion: suspicious for malignancy, manual "
                      "description required\n");
      break;
  }
  return out;
}

std::string RenderReport(const FinalReport& report) {
  std::string out;
  AppendHeader("final", report.preliminary.case_id, report.laterality, &out);
  AppendFieldLines(report.fields, &out);
  absl::StrAppend(&out, "Conclusion: ", VerdictName(report.verdict), "\n");
  return out;
}

std::map<DescriptorField, DescriptorValue> ParseRenderedDescriptors(
    absl::string_view text) {
  std::map<DescriptorField, DescriptorValue> values;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    for (DescriptorField field : kAllDescriptorFields) {
      const std::string prefix = absl::StrCat(FieldLabel(field), ": ");
      absl::string_view rest = line;
      if (!absl::ConsumePrefix(&rest, prefix)) continue;
      absl::StatusOr<DescriptorValue> value = ParseDescriptorTerm(field, rest);
      if (value.ok()) values.emplace(field, *value);
    }
  }
  return values;
}

absl::StatusOr<FinalReport> ApplyReview(const PreliminaryReport& preliminary,
                                        const ReviewSubmission& submission,
                                        int64_t current_version) {
  if (submission.base_version != current_version) {
    return absl::AbortedError(absl::StrCat(
        "version conflict on case ", preliminary.case_id, ": review based on v",
        submission.base_version, ", current is v", current_version));
  }

  std::map<DescriptorField, std::string> edits;
  for (const auto& [name, value] : submission.edits) {
    ASSIGN_OR_RETURN(DescriptorField field, ParseFieldName(name));
    bool present = false;
    for (const ReportField& f : preliminary.fields) present |= f.field == field;
    if (!present) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown field \"", name, "\" for a ",
          RouteName(preliminary.route), " report"));
    }
    const std::string trimmed(absl::StripAsciiWhitespace(value));
    if (trimmed.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty value for field \"", name, "\""));
    }
    edits[field] = trimmed;
  }

  FinalReport final_report;
  final_report.preliminary = preliminary;
  final_report.verdict = submission.verdict;
  final_report.laterality =
      submission.laterality.value_or(preliminary.laterality);
  final_report.reviewer_id = submission.reviewer_id;
  final_report.base_version = submission.base_version;
  final_report.finalized_at_ms = submission.now_ms;

  if (submission.verdict == Verdict::kNormal) {
    if (!edits.empty()) {
      return absl::InvalidArgumentError(
          "a normal verdict takes no descriptor edits");
    }
    return final_report;
  }
  if (preliminary.route == Route::kNormalConclusion) {
    return absl::FailedPreconditionError(absl::StrCat(
        "case ", preliminary.case_id, " was reported normal; triage it as a "
        "lesion before issuing a ", VerdictName(submission.verdict),
        " verdict"));
  }

  std::vector<ReportField> fields = preliminary.fields;
  if (preliminary.route == Route::kBenignAuto &&
      submission.verdict == Verdict::kMalignant) {
    for (ReportField& f : fields) {
      f.value.clear();
      f.provenance = Provenance::kManualPlaceholder;
    }
  }

  for (ReportField& f : fields) {
    auto it = edits.find(f.field);
    if (it == edits.end()) continue;
    f.value = it->second;
    f.provenance = Provenance::kManual;
  }

  std::vector<std::string> missing;
  for (const ReportField& f : fields) {
    if (f.provenance == Provenance::kManualPlaceholder) {
      missing.emplace_back(FieldName(f.field));
    }
  }
  if (!missing.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing mandatory manual fields: ",
                     absl::StrJoin(missing, ", ")));
  }

  for (size_t i = 0; i < fields.size(); ++i) {
    const std::string& old_value = preliminary.fields[i].value;
    if (fields[i].value != old_value) {
      final_report.edit_log.push_back(
          {fields[i].field, old_value, fields[i].value, submission.now_ms});
    }
  }
  final_report.fields = std::move(fields);
  return final_report;
}

}  // namespace sonoreport
