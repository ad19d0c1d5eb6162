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

#ifndef SONOREPORT_CASE_STORE_H_
#define SONOREPORT_CASE_STORE_H_

#include <cstdint>
#include <functional>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sonoreport/case_record.h"
#include "sonoreport/report.h"

namespace sonoreport {

// Aborted status for an optimistic-concurrency failure. The current version
// rides along as a status payload.
absl::Status VersionConflictError(absl::string_view case_id,
                                  int64_t current_version);
// Current version carried by a VersionConflictError, if any.
std::optional<int64_t> ConflictVersion(const absl::Status& status);

// Everything the store knows about one case.
struct StoredCase {
  CaseRecord record;
  std::optional<PreliminaryReport> preliminary;
  // Model fingerprint and case version the preliminary was generated for.
  std::string preliminary_fingerprint;
  int64_t preliminary_version = 0;
  std::optional<FinalReport> final_report;

  friend bool operator==(const StoredCase&, const StoredCase&) = default;
};

// Durable case and report store: an append-only log of JSON lines, one full
// case snapshot per committed write, fsync'd before the write is visible.
// The in-memory index is rebuilt from the log on Open. A torn final line
// (crash mid-append) is dropped; corruption elsewhere fails the open.
//
// Every mutation names the version it expects and bumps it by one. Writes
// are serialized; reads run concurrently and only see committed state.
class CaseStore {
 public:
  static absl::StatusOr<std::unique_ptr<CaseStore>> Open(
      const std::filesystem::path& directory);
  ~CaseStore();

  CaseStore(const CaseStore&) = delete;
  CaseStore& operator=(const CaseStore&) = delete;

  // expected_version 0 creates the case (version 1); otherwise replaces the
  // case data of an unfinalized case, keeping its review state.
  absl::StatusOr<CaseRecord> PutCase(const CaseRecord& record,
                                     int64_t expected_version);

  absl::StatusOr<CaseRecord> GetCase(absl::string_view case_id) const;
  absl::StatusOr<StoredCase> GetStoredCase(absl::string_view case_id) const;

  // Cases whose review state is in `states` (all cases when empty), ordered
  // by case_id.
  std::vector<CaseRecord> ListCases(std::span<const ReviewState> states) const;

  absl::StatusOr<CaseRecord> UpdateTriage(absl::string_view case_id,
                                          int64_t expected_version,
                                          Triage triage);

  // Issues (or re-issues) a preliminary report.
  absl::StatusOr<CaseRecord> RecordPreliminary(
      absl::string_view case_id, int64_t expected_version,
      const PreliminaryReport& preliminary, absl::string_view fingerprint);

  // Finalizes the case. A finalized case only ever yields a conflict.
  absl::StatusOr<CaseRecord> RecordReview(absl::string_view case_id,
                                          int64_t expected_version,
                                          const FinalReport& final_report);

  // Finalized reports ordered by case_id.
  std::vector<FinalReport> ListFinalReports() const;

  const std::filesystem::path& log_path() const { return log_path_; }

 private:
  using Index = std::map<std::string, StoredCase, std::less<>>;

  CaseStore(std::filesystem::path log_path, int fd, Index index);

  // Looks up a case for mutation and checks its version. Caller holds the
  // write lock.
  absl::StatusOr<StoredCase> CheckedCopy(absl::string_view case_id,
                                         int64_t expected_version) const;
  // Appends the snapshot, fsyncs and publishes it. Caller holds the lock.
  absl::Status Commit(StoredCase snapshot);

  const std::filesystem::path log_path_;
  const int fd_;
  mutable std::shared_mutex mu_;
  Index index_;
};

}  // namespace sonoreport

#endif  // SONOREPORT_CASE_STORE_H_
