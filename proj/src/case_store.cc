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

#include "sonoreport/case_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "absl/strings/cord.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "sonoreport/json_codec.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;

constexpr char kLogFileName[] = "cases.log";
constexpr char kVersionPayloadUrl[] = "sonoreport/current_version";

absl::Status Errno(absl::string_view what, const std::filesystem::path& path) {
  return absl::UnavailableError(
      absl::StrCat(what, " ", path.string(), ": ", std::strerror(errno)));
}

absl::Status CaseNotFound(absl::string_view case_id) {
  return absl::NotFoundError(absl::StrCat("unknown case \"", case_id, "\""));
}

Json SnapshotToJson(const StoredCase& stored) {
  Json out{
      {"case", CaseToJson(stored.record)},
      {"preliminary", nullptr},
      {"final", nullptr},
  };
  if (stored.preliminary) {
    out["preliminary"] = PreliminaryToJson(*stored.preliminary);
    out["preliminary_fingerprint"] = stored.preliminary_fingerprint;
    out["preliminary_version"] = stored.preliminary_version;
  }
  if (stored.final_report) out["final"] = FinalToJson(*stored.final_report);
  return out;
}

absl::StatusOr<StoredCase> SnapshotFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("case")) {
    return absl::InvalidArgumentError("log entry lacks a case");
  }
  StoredCase stored;
  ASSIGN_OR_RETURN(stored.record, CaseFromJson(json["case"]));
  if (auto it = json.find("preliminary"); it != json.end() && !it->is_null()) {
    ASSIGN_OR_RETURN(PreliminaryReport prelim, PreliminaryFromJson(*it));
    stored.preliminary = std::move(prelim);
    stored.preliminary_fingerprint =
        json.value("preliminary_fingerprint", std::string());
    stored.preliminary_version = json.value("preliminary_version", int64_t{0});
  }
  if (auto it = json.find("final"); it != json.end() && !it->is_null()) {
    ASSIGN_OR_RETURN(FinalReport final_report, FinalFromJson(*it));
    stored.final_report = std::move(final_report);
  }
  return stored;
}

}  // namespace

absl::Status VersionConflictError(absl::string_view case_id,
                                  int64_t current_version) {
  absl::Status status = absl::AbortedError(
      absl::StrCat("version conflict on case \"", case_id,
                   "\": current version is ", current_version));
  status.SetPayload(kVersionPayloadUrl,
                    absl::Cord(absl::StrCat(current_version)));
  return status;
}

std::optional<int64_t> ConflictVersion(const absl::Status& status) {
  auto payload = status.GetPayload(kVersionPayloadUrl);
  if (!payload) return std::nullopt;
  int64_t version = 0;
  if (!absl::SimpleAtoi(std::string(*payload), &version)) return std::nullopt;
  return version;
}

absl::StatusOr<std::unique_ptr<CaseStore>> CaseStore::Open(
    const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create store directory ", directory.string(), ": ",
        ec.message()));
  }
  const std::filesystem::path log_path = directory / kLogFileName;

  Index index;
  uintmax_t good_bytes = 0;
  bool torn_tail = false;
  {
    std::ifstream in(log_path, std::ios::binary);
    std::string content;
    if (in) {
      std::ostringstream buffer;
      buffer << in.rdbuf();
      content = buffer.str();
    }
    size_t pos = 0;
    int64_t line_no = 0;
    while (pos < content.size()) {
      const size_t end = content.find('\n', pos);
      ++line_no;
      if (end == std::string::npos) {
        // Unterminated tail: the append never completed.
        torn_tail = true;
        break;
      }
      const std::string line = content.substr(pos, end - pos);
      Json json = Json::parse(line, nullptr, /*allow_exceptions=*/false);
      absl::StatusOr<StoredCase> snapshot =
          json.is_discarded()
              ? absl::StatusOr<StoredCase>(
                    absl::InvalidArgumentError("not valid JSON"))
              : SnapshotFromJson(json);
      if (!snapshot.ok()) {
        return absl::DataLossError(absl::StrCat(
            log_path.string(), " line ", line_no, ": ",
            snapshot.status().message()));
      }
      std::string id = snapshot->record.case_id;
      index[id] = *std::move(snapshot);
      pos = end + 1;
      good_bytes = pos;
    }
  }
  if (torn_tail) {
    std::filesystem::resize_file(log_path, good_bytes, ec);
    if (ec) {
      return absl::UnavailableError(absl::StrCat(
          "cannot trim torn log tail: ", ec.message()));
    }
  }

  const int fd = ::open(log_path.c_str(), O_WRONLY | O_APPEND | O_CREAT |
                                              O_CLOEXEC, 0644);
  if (fd < 0) return Errno("cannot open", log_path);
  return std::unique_ptr<CaseStore>(
      new CaseStore(log_path, fd, std::move(index)));
}

CaseStore::CaseStore(std::filesystem::path log_path, int fd, Index index)
    : log_path_(std::move(log_path)), fd_(fd), index_(std::move(index)) {}

CaseStore::~CaseStore() { ::close(fd_); }

absl::StatusOr<StoredCase> CaseStore::CheckedCopy(
    absl::string_view case_id, int64_t expected_version) const {
  auto it = index_.find(case_id);
  if (it == index_.end()) return CaseNotFound(case_id);
  if (it->second.record.version != expected_version) {
    return VersionConflictError(case_id, it->second.record.version);
  }
  return it->second;
}

absl::Status CaseStore::Commit(StoredCase snapshot) {
  const std::string line = SnapshotToJson(snapshot).dump() + "\n";
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n =
        ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("write failed on", log_path_);
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd_) != 0) return Errno("fsync failed on", log_path_);
  std::string id = snapshot.record.case_id;
  index_[id] = std::move(snapshot);
  return absl::OkStatus();
}

absl::StatusOr<CaseRecord> CaseStore::PutCase(const CaseRecord& record,
                                              int64_t expected_version) {
  if (record.case_id.empty()) {
    return absl::InvalidArgumentError("empty case_id");
  }
  std::unique_lock lock(mu_);
  StoredCase snapshot;
  if (expected_version == 0) {
    if (auto it = index_.find(record.case_id); it != index_.end()) {
      return VersionConflictError(record.case_id, it->second.record.version);
    }
    snapshot.record = record;
    snapshot.record.review = ReviewState::kUnreviewed;
    snapshot.record.version = 1;
  } else {
    ASSIGN_OR_RETURN(snapshot, CheckedCopy(record.case_id, expected_version));
    if (snapshot.record.review == ReviewState::kFinalized) {
      return VersionConflictError(record.case_id, snapshot.record.version);
    }
    const ReviewState review = snapshot.record.review;
    snapshot.record = record;
    snapshot.record.review = review;
    snapshot.record.version = expected_version + 1;
  }
  RETURN_IF_ERROR(Commit(snapshot));
  return index_.find(record.case_id)->second.record;
}

absl::StatusOr<CaseRecord> CaseStore::GetCase(absl::string_view case_id) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(case_id);
  if (it == index_.end()) return CaseNotFound(case_id);
  return it->second.record;
}

absl::StatusOr<StoredCase> CaseStore::GetStoredCase(
    absl::string_view case_id) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(case_id);
  if (it == index_.end()) return CaseNotFound(case_id);
  return it->second;
}

std::vector<CaseRecord> CaseStore::ListCases(
    std::span<const ReviewState> states) const {
  std::shared_lock lock(mu_);
  std::vector<CaseRecord> out;
  for (const auto& [id, stored] : index_) {
    bool match = states.empty();
    for (ReviewState s : states) match = match || stored.record.review == s;
    if (match) out.push_back(stored.record);
  }
  return out;
}

absl::StatusOr<CaseRecord> CaseStore::UpdateTriage(absl::string_view case_id,
                                                   int64_t expected_version,
                                                   Triage triage) {
  std::unique_lock lock(mu_);
  ASSIGN_OR_RETURN(StoredCase snapshot, CheckedCopy(case_id, expected_version));
  if (snapshot.record.review == ReviewState::kFinalized) {
    return VersionConflictError(case_id, snapshot.record.version);
  }
  ASSIGN_OR_RETURN(snapshot.record, WithTriage(snapshot.record, triage));
  RETURN_IF_ERROR(Commit(snapshot));
  return snapshot.record;
}

absl::StatusOr<CaseRecord> CaseStore::RecordPreliminary(
    absl::string_view case_id, int64_t expected_version,
    const PreliminaryReport& preliminary, absl::string_view fingerprint) {
  if (preliminary.case_id != case_id) {
    return absl::InvalidArgumentError("preliminary report is for another case");
  }
  std::unique_lock lock(mu_);
  ASSIGN_OR_RETURN(StoredCase snapshot, CheckedCopy(case_id, expected_version));
  if (snapshot.record.review == ReviewState::kFinalized) {
    return VersionConflictError(case_id, snapshot.record.version);
  }
  ASSIGN_OR_RETURN(snapshot.record,
                   WithReview(snapshot.record, ReviewState::kPreliminaryIssued));
  snapshot.preliminary = preliminary;
  snapshot.preliminary_fingerprint = std::string(fingerprint);
  snapshot.preliminary_version = snapshot.record.version;
  RETURN_IF_ERROR(Commit(snapshot));
  return snapshot.record;
}

absl::StatusOr<CaseRecord> CaseStore::RecordReview(
    absl::string_view case_id, int64_t expected_version,
    const FinalReport& final_report) {
  if (final_report.preliminary.case_id != case_id) {
    return absl::InvalidArgumentError("final report is for another case");
  }
  std::unique_lock lock(mu_);
  ASSIGN_OR_RETURN(StoredCase snapshot, CheckedCopy(case_id, expected_version));
  if (snapshot.record.review != ReviewState::kPreliminaryIssued) {
    if (snapshot.record.review == ReviewState::kFinalized) {
      return VersionConflictError(case_id, snapshot.record.version);
    }
    return absl::FailedPreconditionError(
        absl::StrCat("case \"", case_id, "\" has no preliminary report"));
  }
  snapshot.record.laterality = final_report.laterality;
  ASSIGN_OR_RETURN(snapshot.record,
                   WithReview(snapshot.record, ReviewState::kFinalized));
  snapshot.final_report = final_report;
  RETURN_IF_ERROR(Commit(snapshot));
  return snapshot.record;
}

std::vector<FinalReport> CaseStore::ListFinalReports() const {
  std::shared_lock lock(mu_);
  std::vector<FinalReport> out;
  for (const auto& [id, stored] : index_) {
    if (stored.final_report) out.push_back(*stored.final_report);
  }
  return out;
}

}  // namespace sonoreport
