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

#include "sonoreport/http_server.h"

#include "absl/strings/str_cat.h"
#include "httplib.h"

namespace sonoreport {
namespace {

constexpr char kAnyPath[] = ".*";
constexpr char kReviewerHeader[] = "X-Reviewer-Id";

}  // namespace

HttpServer::HttpServer(const ReviewService* service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) {
      request.query.emplace(key, value);
    }
    request.body = req.body;
    request.reviewer_id = req.get_header_value(kReviewerHeader);
    ApiResponse response = service_->Handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  server_->Get(kAnyPath, forward);
  server_->Post(kAnyPath, forward);
  server_->Put(kAnyPath, forward);
  server_->Delete(kAnyPath, forward);
  server_->Patch(kAnyPath, forward);
}

HttpServer::~HttpServer() { Stop(); }

absl::StatusOr<int> HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) {
      return absl::UnavailableError(absl::StrCat("cannot bind ", host));
    }
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    return absl::UnavailableError(
        absl::StrCat("cannot bind ", host, ":", port));
  }
  return port;
}

absl::Status HttpServer::Serve() {
  if (!server_->listen_after_bind()) {
    return absl::UnavailableError("server stopped with an error");
  }
  return absl::OkStatus();
}

void HttpServer::WaitUntilReady() const { server_->wait_until_ready(); }

void HttpServer::Stop() {
  if (server_->is_running()) server_->stop();
}

}  // namespace sonoreport
