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

#include "sonoreport/service.h"

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "sonoreport/json_codec.h"
#include "sonoreport/metrics.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;

constexpr char kFieldPayloadUrl[] = "sonoreport/field";
constexpr int kPreliminaryAttempts = 3;

absl::Status FieldError(absl::string_view field, absl::string_view message) {
  absl::Status status = absl::InvalidArgumentError(
      absl::StrCat("\"", field, "\": ", message));
  status.SetPayload(kFieldPayloadUrl, absl::Cord(field));
  return status;
}

ApiResponse Ok(Json body, int status = 200) {
  return ApiResponse{status, std::move(body)};
}

absl::StatusOr<Json> ParseBody(const ApiRequest& request) {
  Json body = Json::parse(request.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded() || !body.is_object()) {
    return absl::InvalidArgumentError("request body must be a JSON object");
  }
  return body;
}

absl::StatusOr<int64_t> BaseVersion(const Json& body) {
  auto it = body.find("base_version");
  if (it == body.end() || !it->is_number_integer()) {
    return FieldError("base_version", "required integer");
  }
  return it->get<int64_t>();
}

absl::StatusOr<std::string> StringField(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    return FieldError(key, "required string");
  }
  return it->get<std::string>();
}

// Re-tags a parse error with the field it came from.
template <typename T>
absl::StatusOr<T> Tag(absl::StatusOr<T> value, absl::string_view field) {
  if (value.ok()) return value;
  return FieldError(field, value.status().message());
}

Json CaseSummary(const CaseRecord& record) {
  return Json{
      {"case_id", record.case_id},
      {"laterality", LateralityName(record.laterality)},
      {"triage", TriageName(record.triage)},
      {"review", ReviewStateName(record.review)},
      {"version", record.version},
  };
}

bool EfficiencyEligible(const FinalReport& report) {
  return report.preliminary.route == Route::kBenignAuto &&
         report.verdict == Verdict::kBenign;
}

std::vector<std::string> PathSegments(const std::string& path) {
  std::vector<std::string> out;
  for (absl::string_view part : absl::StrSplit(path, '/', absl::SkipEmpty())) {
    out.emplace_back(part);
  }
  return out;
}

ApiResponse MethodNotAllowed(const ApiRequest& request) {
  ApiResponse response = ErrorResponse(absl::InvalidArgumentError(
      absl::StrCat(request.method, " not allowed on ", request.path)));
  response.status = 405;
  return response;
}

}  // namespace

std::shared_ptr<const ModelSet> ModelRegistry::Get() const {
  std::lock_guard lock(mu_);
  return current_;
}

void ModelRegistry::Swap(ModelSet models) {
  auto next = std::make_shared<const ModelSet>(std::move(models));
  std::lock_guard lock(mu_);
  current_ = std::move(next);
}

ApiResponse ErrorResponse(const absl::Status& status) {
  int http = 500;
  std::string code = "internal";
  Json details = Json::object();
  switch (status.code()) {
    case absl::StatusCode::kNotFound:
      http = 404;
      code = "not_found";
      break;
    case absl::StatusCode::kAborted:
    case absl::StatusCode::kAlreadyExists:
      http = 409;
      code = "conflict";
      if (std::optional<int64_t> v = ConflictVersion(status)) {
        details["current_version"] = *v;
      }
      break;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      http = 400;
      code = "validation";
      if (auto field = status.GetPayload(kFieldPayloadUrl)) {
        details["field"] = std::string(*field);
      }
      break;
    case absl::StatusCode::kUnavailable:
      http = 503;
      break;
    default:
      break;
  }
  return ApiResponse{
      http, Json{{"error", Json{{"code", code},
                                {"message", std::string(status.message())},
                                {"details", std::move(details)}}}}};
}

ReviewService::ReviewService(CaseStore* store, ModelRegistry* models,
                             ServiceOptions options)
    : store_(store), models_(models), options_(std::move(options)) {}

int64_t ReviewService::Now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ApiResponse ReviewService::Handle(const ApiRequest& request) const {
  const std::vector<std::string> seg = PathSegments(request.path);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  auto only = [&](bool allowed, auto&& handler) -> ApiResponse {
    return allowed ? handler() : MethodNotAllowed(request);
  };

  if (seg.size() == 1 && seg[0] == "worklist") {
    return only(get, [&] { return Worklist(request); });
  }
  if (seg.size() == 1 && seg[0] == "cases") {
    return only(post, [&] { return CreateCase(request); });
  }
  if (seg.size() == 2 && seg[0] == "case") {
    return only(get, [&] { return GetCase(seg[1]); });
  }
  if (seg.size() == 3 && seg[0] == "case") {
    const std::string& id = seg[1];
    if (seg[2] == "preliminary") {
      return only(get, [&] { return Preliminary(id); });
    }
    if (seg[2] == "report") return only(get, [&] { return FinalReportOf(id); });
    if (seg[2] == "review") {
      return only(post, [&] { return Review(id, request); });
    }
    if (seg[2] == "triage") {
      return only(post, [&] { return Triage(id, request); });
    }
  }
  if (seg.size() == 2 && seg[0] == "metrics") {
    if (seg[1] == "summary") {
      return only(get, [&] { return MetricsSummary(request); });
    }
    if (seg[1] == "roc") return only(get, [&] { return MetricsRoc(); });
  }
  if (seg.size() == 2 && seg[0] == "admin" && seg[1] == "models") {
    if (get) return ModelInfo();
    return only(post, [&] { return AdminModels(request); });
  }
  return ErrorResponse(
      absl::NotFoundError(absl::StrCat("no endpoint at ", request.path)));
}

ApiResponse ReviewService::Worklist(const ApiRequest& request) const {
  std::vector<ReviewState> states;
  auto it = request.query.find("state");
  const std::string state = it == request.query.end() ? "pending" : it->second;
  if (state == "pending") {
    states = {ReviewState::kUnreviewed, ReviewState::kPreliminaryIssued};
  } else if (state != "all") {
    absl::StatusOr<ReviewState> parsed = ParseReviewState(state);
    if (!parsed.ok()) {
      return ErrorResponse(FieldError("state", parsed.status().message()));
    }
    states = {*parsed};
  }
  Json cases = Json::array();
  for (const CaseRecord& record : store_->ListCases(states)) {
    cases.push_back(CaseSummary(record));
  }
  return Ok(Json{{"state", state}, {"cases", std::move(cases)}});
}

ApiResponse ReviewService::GetCase(const std::string& case_id) const {
  absl::StatusOr<CaseRecord> record = store_->GetCase(case_id);
  if (!record.ok()) return ErrorResponse(record.status());
  return Ok(Json{{"case", CaseToJson(*record)}});
}

ApiResponse ReviewService::Preliminary(const std::string& case_id) const {
  for (int attempt = 0; attempt < kPreliminaryAttempts; ++attempt) {
    absl::StatusOr<StoredCase> stored = store_->GetStoredCase(case_id);
    if (!stored.ok()) return ErrorResponse(stored.status());
    const CaseRecord& record = stored->record;
    const bool finalized = record.review == ReviewState::kFinalized;
    std::shared_ptr<const ModelSet> models = models_->Get();

    const bool fresh =
        stored->preliminary &&
        (finalized ||
         (models && stored->preliminary_fingerprint == models->fingerprint &&
          stored->preliminary_version == record.version));
    if (fresh) {
      return Ok(Json{
          {"case_id", case_id},
          {"version", record.version},
          {"fingerprint", stored->preliminary_fingerprint},
          {"report", PreliminaryToJson(*stored->preliminary)},
          {"rendered", RenderReport(*stored->preliminary)},
      });
    }
    if (finalized) {
      return ErrorResponse(VersionConflictError(case_id, record.version));
    }
    if (!models) {
      return ErrorResponse(absl::UnavailableError("no models loaded"));
    }
    absl::StatusOr<PreliminaryReport> prelim = BuildPreliminary(
        *models, record, options_.threshold, std::nullopt, Now());
    if (!prelim.ok()) return ErrorResponse(prelim.status());
    absl::StatusOr<CaseRecord> updated = store_->RecordPreliminary(
        case_id, record.version, *prelim, models->fingerprint);
    if (absl::IsAborted(updated.status())) continue;
    if (!updated.ok()) return ErrorResponse(updated.status());
    // Loop once more so the body always comes from the committed state.
  }
  return ErrorResponse(absl::AbortedError(
      absl::StrCat("case \"", case_id, "\" kept changing; retry")));
}

ApiResponse ReviewService::FinalReportOf(const std::string& case_id) const {
  absl::StatusOr<StoredCase> stored = store_->GetStoredCase(case_id);
  if (!stored.ok()) return ErrorResponse(stored.status());
  if (!stored->final_report) {
    return ErrorResponse(absl::NotFoundError(
        absl::StrCat("case \"", case_id, "\" has no final report")));
  }
  return Ok(Json{
      {"case_id", case_id},
      {"version", stored->record.version},
      {"report", FinalToJson(*stored->final_report)},
      {"rendered", RenderReport(*stored->final_report)},
  });
}

ApiResponse ReviewService::Review(const std::string& case_id,
                                  const ApiRequest& request) const {
  auto run = [&]() -> absl::StatusOr<Json> {
    if (request.reviewer_id.empty()) {
      return FieldError("X-Reviewer-Id", "header required");
    }
    ASSIGN_OR_RETURN(Json body, ParseBody(request));
    ReviewSubmission submission;
    submission.reviewer_id = request.reviewer_id;
    submission.now_ms = Now();
    ASSIGN_OR_RETURN(submission.base_version, BaseVersion(body));
    ASSIGN_OR_RETURN(std::string verdict, StringField(body, "verdict"));
    ASSIGN_OR_RETURN(submission.verdict, Tag(ParseVerdict(verdict), "verdict"));
    if (auto it = body.find("edits"); it != body.end() && !it->is_null()) {
      if (!it->is_object()) return FieldError("edits", "must be an object");
      for (auto& [field, value] : it->items()) {
        if (!value.is_string()) return FieldError(field, "must be a string");
        submission.edits[field] = value.get<std::string>();
      }
    }
    if (body.contains("laterality")) {
      ASSIGN_OR_RETURN(std::string lat, StringField(body, "laterality"));
      ASSIGN_OR_RETURN(submission.laterality,
                       Tag(ParseLaterality(lat), "laterality"));
    }

    ASSIGN_OR_RETURN(StoredCase stored, store_->GetStoredCase(case_id));
    if (stored.record.review == ReviewState::kFinalized) {
      return VersionConflictError(case_id, stored.record.version);
    }
    if (!stored.preliminary) {
      return absl::FailedPreconditionError(
          "no preliminary report has been issued for this case");
    }
    if (submission.base_version != stored.record.version) {
      return VersionConflictError(case_id, stored.record.version);
    }
    if (stored.preliminary_version != stored.record.version) {
      return absl::FailedPreconditionError(
          "the case changed after its preliminary report; fetch it again");
    }
    ASSIGN_OR_RETURN(FinalReport final_report,
                     ApplyReview(*stored.preliminary, submission,
                                 stored.record.version));
    ASSIGN_OR_RETURN(CaseRecord updated,
                     store_->RecordReview(case_id, submission.base_version,
                                          final_report));
    return Json{
        {"case", CaseToJson(updated)},
        {"report", FinalToJson(final_report)},
        {"rendered", RenderReport(final_report)},
    };
  };
  absl::StatusOr<Json> result = run();
  if (!result.ok()) return ErrorResponse(result.status());
  return Ok(*std::move(result));
}

ApiResponse ReviewService::Triage(const std::string& case_id,
                                  const ApiRequest& request) const {
  auto run = [&]() -> absl::StatusOr<Json> {
    ASSIGN_OR_RETURN(Json body, ParseBody(request));
    ASSIGN_OR_RETURN(int64_t base_version, BaseVersion(body));
    ASSIGN_OR_RETURN(std::string name, StringField(body, "triage"));
    ASSIGN_OR_RETURN(sonoreport::Triage triage,
                     Tag(ParseTriage(name), "triage"));
    ASSIGN_OR_RETURN(CaseRecord updated,
                     store_->UpdateTriage(case_id, base_version, triage));
    return Json{{"case", CaseToJson(updated)}};
  };
  absl::StatusOr<Json> result = run();
  if (!result.ok()) return ErrorResponse(result.status());
  return Ok(*std::move(result));
}

ApiResponse ReviewService::CreateCase(const ApiRequest& request) const {
  auto run = [&]() -> absl::StatusOr<Json> {
    ASSIGN_OR_RETURN(Json body, ParseBody(request));
    ASSIGN_OR_RETURN(RawCaseRecord raw, RawCaseFromJson(body));
    std::shared_ptr<const ModelSet> models = models_->Get();
    const size_t dim = models ? models->dimension() : raw.features.size();
    ASSIGN_OR_RETURN(CaseRecord record, ValidateCase(raw, dim));
    ASSIGN_OR_RETURN(CaseRecord stored, store_->PutCase(record, 0));
    return Json{{"case", CaseToJson(stored)}};
  };
  absl::StatusOr<Json> result = run();
  if (!result.ok()) return ErrorResponse(result.status());
  return Ok(*std::move(result), 201);
}

ApiResponse ReviewService::MetricsSummary(const ApiRequest& request) const {
  std::vector<FinalReport> finals = store_->ListFinalReports();
  if (auto it = request.query.find("case_id"); it != request.query.end()) {
    std::erase_if(finals, [&](const FinalReport& r) {
      return r.preliminary.case_id != it->second;
    });
  }
  std::map<std::string, int64_t> verdicts = {
      {"normal", 0}, {"benign", 0}, {"malignant", 0}};
  std::vector<FinalReport> eligible;
  for (const FinalReport& r : finals) {
    ++verdicts[std::string(VerdictName(r.verdict))];
    if (EfficiencyEligible(r)) eligible.push_back(r);
  }
  Json efficiency{{"reports", eligible.size()},
                  {"index", nullptr},
                  {"unchanged_fields", 0},
                  {"fields", 0},
                  {"by_field", Json::array()}};
  if (!eligible.empty()) {
    absl::StatusOr<double> index = EfficiencyIndex(eligible);
    auto by_field = EfficiencyByField(eligible);
    if (!index.ok()) return ErrorResponse(index.status());
    if (!by_field.ok()) return ErrorResponse(by_field.status());
    int64_t unchanged = 0;
    int64_t fields = 0;
    for (const auto& [name, entry] : *by_field) {
      unchanged += std::llround(entry.value() * entry.n());
      fields += entry.n();
      efficiency["by_field"].push_back(
          Json{{"field", name}, {"value", entry.value()}, {"n", entry.n()}});
    }
    efficiency["index"] = *index;
    efficiency["unchanged_fields"] = unchanged;
    efficiency["fields"] = fields;
  }
  return Ok(Json{{"finalized", finals.size()},
                 {"verdicts", verdicts},
                 {"efficiency", std::move(efficiency)}});
}

ApiResponse ReviewService::MetricsRoc() const {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const FinalReport& r : store_->ListFinalReports()) {
    if (r.verdict == Verdict::kNormal ||
        r.preliminary.route == Route::kNormalConclusion) {
      continue;
    }
    scores.push_back(r.preliminary.verdict_score);
    labels.push_back(r.verdict == Verdict::kMalignant ? 1 : 0);
  }
  int64_t positives = 0;
  for (int l : labels) positives += l;
  Json body{{"positives", positives},
            {"negatives", static_cast<int64_t>(labels.size()) - positives},
            {"auc", nullptr},
            {"points", Json::array()}};
  if (positives > 0 && positives < static_cast<int64_t>(labels.size())) {
    absl::StatusOr<RocCurve> curve = ComputeRoc(scores, labels);
    if (!curve.ok()) return ErrorResponse(curve.status());
    body["auc"] = curve->auc;
    for (const RocPoint& p : curve->points) {
      body["points"].push_back(Json{{"fpr", p.fpr}, {"tpr", p.tpr}});
    }
  }
  return Ok(std::move(body));
}

ApiResponse ReviewService::AdminModels(const ApiRequest& request) const {
  auto run = [&]() -> absl::StatusOr<Json> {
    ASSIGN_OR_RETURN(Json body, ParseBody(request));
    auto it = body.find("paths");
    if (it == body.end() || !it->is_array() || it->empty()) {
      return FieldError("paths", "required non-empty array of model files");
    }
    std::vector<std::filesystem::path> paths;
    for (const Json& p : *it) {
      if (!p.is_string()) return FieldError("paths", "entries must be strings");
      paths.emplace_back(p.get<std::string>());
    }
    absl::StatusOr<ModelSet> models = LoadModelSet(paths);
    if (!models.ok()) {
      return FieldError("paths", models.status().message());
    }
    Json out{{"fingerprint", models->fingerprint},
             {"dimension", models->dimension()}};
    models_->Swap(*std::move(models));
    return out;
  };
  absl::StatusOr<Json> result = run();
  if (!result.ok()) return ErrorResponse(result.status());
  return Ok(*std::move(result));
}

ApiResponse ReviewService::ModelInfo() const {
  std::shared_ptr<const ModelSet> models = models_->Get();
  if (!models) return ErrorResponse(absl::UnavailableError("no models loaded"));
  return Ok(Json{{"fingerprint", models->fingerprint},
                 {"dimension", models->dimension()}});
}

}  // namespace sonoreport
