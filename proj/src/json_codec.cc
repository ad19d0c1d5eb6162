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

#include "sonoreport/json_codec.h"

#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;

absl::Status Missing(const char* key, const char* kind) {
  return absl::InvalidArgumentError(
      absl::StrCat("missing or non-", kind, " \"", key, "\""));
}

absl::StatusOr<std::string> GetString(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return Missing(key, "string");
  return it->get<std::string>();
}

absl::StatusOr<int64_t> GetInt(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    return Missing(key, "integer");
  }
  return it->get<int64_t>();
}

absl::StatusOr<double> GetNumber(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) return Missing(key, "numeric");
  return it->get<double>();
}

absl::StatusOr<std::vector<double>> GetNumbers(const Json& obj,
                                               const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) return Missing(key, "array");
  std::vector<double> out;
  out.reserve(it->size());
  for (const Json& v : *it) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-numeric entry in \"", key, "\""));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

absl::StatusOr<std::map<std::string, double>> GetScores(const Json& obj,
                                                        const char* key) {
  std::map<std::string, double> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_object()) return Missing(key, "object");
  for (auto& [name, v] : it->items()) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-numeric score \"", name, "\""));
    }
    out[name] = v.get<double>();
  }
  return out;
}

Json FieldsToJson(const std::vector<ReportField>& fields) {
  Json out = Json::array();
  for (const ReportField& f : fields) out.push_back(ReportFieldToJson(f));
  return out;
}

absl::StatusOr<std::vector<ReportField>> FieldsFromJson(const Json& obj) {
  auto it = obj.find("fields");
  if (it == obj.end() || !it->is_array()) return Missing("fields", "array");
  std::vector<ReportField> out;
  for (const Json& f : *it) {
    ASSIGN_OR_RETURN(ReportField field, ReportFieldFromJson(f));
    out.push_back(std::move(field));
  }
  return out;
}

}  // namespace

Json CaseToJson(const CaseRecord& record) {
  Json scores = Json::object();
  for (const auto& [name, p] : record.external_scores) scores[name] = p;
  return Json{
      {"case_id", record.case_id},
      {"laterality", LateralityName(record.laterality)},
      {"features", record.features.values},
      {"source", FeatureSourceName(record.features.source)},
      {"external_scores", std::move(scores)},
      {"triage", TriageName(record.triage)},
      {"review", ReviewStateName(record.review)},
      {"version", record.version},
  };
}

absl::StatusOr<CaseRecord> CaseFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("case is not an object");
  CaseRecord record;
  ASSIGN_OR_RETURN(record.case_id, GetString(json, "case_id"));
  ASSIGN_OR_RETURN(std::string laterality, GetString(json, "laterality"));
  ASSIGN_OR_RETURN(record.laterality, ParseLaterality(laterality));
  ASSIGN_OR_RETURN(record.features.values, GetNumbers(json, "features"));
  ASSIGN_OR_RETURN(std::string source, GetString(json, "source"));
  ASSIGN_OR_RETURN(record.features.source, ParseFeatureSource(source));
  ASSIGN_OR_RETURN(record.external_scores, GetScores(json, "external_scores"));
  ASSIGN_OR_RETURN(std::string triage, GetString(json, "triage"));
  ASSIGN_OR_RETURN(record.triage, ParseTriage(triage));
  ASSIGN_OR_RETURN(std::string review, GetString(json, "review"));
  ASSIGN_OR_RETURN(record.review, ParseReviewState(review));
  ASSIGN_OR_RETURN(record.version, GetInt(json, "version"));
  return record;
}

absl::StatusOr<RawCaseRecord> RawCaseFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("case is not an object");
  RawCaseRecord raw;
  ASSIGN_OR_RETURN(raw.case_id, GetString(json, "case_id"));
  ASSIGN_OR_RETURN(raw.features, GetNumbers(json, "features"));
  if (json.contains("laterality")) {
    ASSIGN_OR_RETURN(raw.laterality, GetString(json, "laterality"));
  }
  if (json.contains("source")) {
    ASSIGN_OR_RETURN(raw.source, GetString(json, "source"));
  }
  ASSIGN_OR_RETURN(raw.external_scores, GetScores(json, "external_scores"));
  return raw;
}

Json ReportFieldToJson(const ReportField& field) {
  return Json{
      {"field", FieldName(field.field)},
      {"value", field.value},
      {"provenance", ProvenanceName(field.provenance)},
  };
}

absl::StatusOr<ReportField> ReportFieldFromJson(const Json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("field is not an object");
  ReportField field;
  ASSIGN_OR_RETURN(std::string name, GetString(json, "field"));
  ASSIGN_OR_RETURN(field.field, ParseFieldName(name));
  ASSIGN_OR_RETURN(field.value, GetString(json, "value"));
  ASSIGN_OR_RETURN(std::string provenance, GetString(json, "provenance"));
  ASSIGN_OR_RETURN(field.provenance, ParseProvenance(provenance));
  return field;
}

Json PreliminaryToJson(const PreliminaryReport& report) {
  return Json{
      {"case_id", report.case_id},
      {"laterality", LateralityName(report.laterality)},
      {"route", RouteName(report.route)},
      {"verdict_score", report.verdict_score},
      {"fields", FieldsToJson(report.fields)},
      {"created_at_ms", report.created_at_ms},
  };
}

absl::StatusOr<PreliminaryReport> PreliminaryFromJson(const Json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("preliminary report is not an object");
  }
  PreliminaryReport report;
  ASSIGN_OR_RETURN(report.case_id, GetString(json, "case_id"));
  ASSIGN_OR_RETURN(std::string laterality, GetString(json, "laterality"));
  ASSIGN_OR_RETURN(report.laterality, ParseLaterality(laterality));
  ASSIGN_OR_RETURN(std::string route, GetString(json, "route"));
  ASSIGN_OR_RETURN(report.route, ParseRoute(route));
  ASSIGN_OR_RETURN(report.verdict_score, GetNumber(json, "verdict_score"));
  ASSIGN_OR_RETURN(report.fields, FieldsFromJson(json));
  ASSIGN_OR_RETURN(report.created_at_ms, GetInt(json, "created_at_ms"));
  return report;
}

Json FinalToJson(const FinalReport& report) {
  Json log = Json::array();
  for (const EditLogEntry& e : report.edit_log) {
    log.push_back(Json{
        {"field", FieldName(e.field)},
        {"old_value", e.old_value},
        {"new_value", e.new_value},
        {"timestamp_ms", e.timestamp_ms},
    });
  }
  return Json{
      {"preliminary", PreliminaryToJson(report.preliminary)},
      {"verdict", VerdictName(report.verdict)},
      {"laterality", LateralityName(report.laterality)},
      {"fields", FieldsToJson(report.fields)},
      {"edit_log", std::move(log)},
      {"reviewer_id", report.reviewer_id},
      {"base_version", report.base_version},
      {"finalized_at_ms", report.finalized_at_ms},
  };
}

absl::StatusOr<FinalReport> FinalFromJson(const Json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("final report is not an object");
  }
  FinalReport report;
  auto prelim = json.find("preliminary");
  if (prelim == json.end()) return Missing("preliminary", "object");
  ASSIGN_OR_RETURN(report.preliminary, PreliminaryFromJson(*prelim));
  ASSIGN_OR_RETURN(std::string verdict, GetString(json, "verdict"));
  ASSIGN_OR_RETURN(report.verdict, ParseVerdict(verdict));
  ASSIGN_OR_RETURN(std::string laterality, GetString(json, "laterality"));
  ASSIGN_OR_RETURN(report.laterality, ParseLaterality(laterality));
  ASSIGN_OR_RETURN(report.fields, FieldsFromJson(json));
  auto log = json.find("edit_log");
  if (log == json.end() || !log->is_array()) return Missing("edit_log", "array");
  for (const Json& e : *log) {
    if (!e.is_object()) {
      return absl::InvalidArgumentError("edit log entry is not an object");
    }
    EditLogEntry entry;
    ASSIGN_OR_RETURN(std::string name, GetString(e, "field"));
    ASSIGN_OR_RETURN(entry.field, ParseFieldName(name));
    ASSIGN_OR_RETURN(entry.old_value, GetString(e, "old_value"));
    ASSIGN_OR_RETURN(entry.new_value, GetString(e, "new_value"));
    ASSIGN_OR_RETURN(entry.timestamp_ms, GetInt(e, "timestamp_ms"));
    report.edit_log.push_back(std::move(entry));
  }
  ASSIGN_OR_RETURN(report.reviewer_id, GetString(json, "reviewer_id"));
  ASSIGN_OR_RETURN(report.base_version, GetInt(json, "base_version"));
  ASSIGN_OR_RETURN(report.finalized_at_ms, GetInt(json, "finalized_at_ms"));
  return report;
}

}  // namespace sonoreport
