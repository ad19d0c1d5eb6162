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

#ifndef SONOREPORT_SERVICE_H_
#define SONOREPORT_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "json.hpp"
#include "sonoreport/case_store.h"
#include "sonoreport/pipeline.h"

namespace sonoreport {

// Holds the active model set. Readers take a snapshot, so a swap never
// disturbs a request already in flight.
class ModelRegistry {
 public:
  std::shared_ptr<const ModelSet> Get() const;
  void Swap(ModelSet models);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const ModelSet> current_;
};

struct ApiRequest {
  std::string method;
  // Decoded path without query string, e.g. "/case/c1/review".
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  // Value of the X-Reviewer-Id header; empty when absent.
  std::string reviewer_id;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Maps a status to {"error": {"code", "message", "details"}}: NotFound ->
// 404 not_found, Aborted and AlreadyExists -> 409 conflict (with
// details.current_version when known), InvalidArgument, FailedPrecondition
// and OutOfRange -> 400 validation, Unavailable -> 503 internal, anything
// else -> 500 internal.
ApiResponse ErrorResponse(const absl::Status& status);

struct ServiceOptions {
  double threshold = kDefaultThreshold;
  // Milliseconds since the epoch.
  std::function<int64_t()> clock;
};

// Request handling for the review workflow. Handlers keep no state of their
// own: cases and reports live in the store, models in the registry. See
// docs/api.md for the endpoint contract.
class ReviewService {
 public:
  ReviewService(CaseStore* store, ModelRegistry* models,
                ServiceOptions options);

  ApiResponse Handle(const ApiRequest& request) const;

 private:
  ApiResponse Worklist(const ApiRequest& request) const;
  ApiResponse GetCase(const std::string& case_id) const;
  ApiResponse Preliminary(const std::string& case_id) const;
  ApiResponse FinalReportOf(const std::string& case_id) const;
  ApiResponse Review(const std::string& case_id,
                     const ApiRequest& request) const;
  ApiResponse Triage(const std::string& case_id,
                     const ApiRequest& request) const;
  ApiResponse CreateCase(const ApiRequest& request) const;
  ApiResponse MetricsSummary(const ApiRequest& request) const;
  ApiResponse MetricsRoc() const;
  ApiResponse AdminModels(const ApiRequest& request) const;
  ApiResponse ModelInfo() const;

  int64_t Now() const;

  CaseStore* const store_;
  ModelRegistry* const models_;
  const ServiceOptions options_;
};

}  // namespace sonoreport

#endif  // SONOREPORT_SERVICE_H_
