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

#ifndef SONOREPORT_JSON_CODEC_H_
#define SONOREPORT_JSON_CODEC_H_

#include "absl/status/statusor.h"
#include "json.hpp"
#include "sonoreport/case_record.h"
#include "sonoreport/report.h"

namespace sonoreport {

// Interchange form of the domain types shared by the store log and the
// service. Enums are canonical lowercase names; timestamps are integer
// milliseconds since the epoch.

nlohmann::json CaseToJson(const CaseRecord& record);
absl::StatusOr<CaseRecord> CaseFromJson(const nlohmann::json& json);

// Ingestion payload: {"case_id", "laterality", "features", "source",
// "external_scores"}. Only case_id and features are required.
absl::StatusOr<RawCaseRecord> RawCaseFromJson(const nlohmann::json& json);

nlohmann::json ReportFieldToJson(const ReportField& field);
absl::StatusOr<ReportField> ReportFieldFromJson(const nlohmann::json& json);

nlohmann::json PreliminaryToJson(const PreliminaryReport& report);
absl::StatusOr<PreliminaryReport> PreliminaryFromJson(
    const nlohmann::json& json);

nlohmann::json FinalToJson(const FinalReport& report);
absl::StatusOr<FinalReport> FinalFromJson(const nlohmann::json& json);

}  // namespace sonoreport

#endif  // SONOREPORT_JSON_CODEC_H_
