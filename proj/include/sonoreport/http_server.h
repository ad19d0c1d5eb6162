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

#ifndef SONOREPORT_HTTP_SERVER_H_
#define SONOREPORT_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sonoreport/service.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace sonoreport {

// HTTP/JSON front end for a ReviewService. Every request is forwarded to
// ReviewService::Handle; the server adds no routing of its own.
class HttpServer {
 public:
  explicit HttpServer(const ReviewService* service);
  ~HttpServer();

  // Binds without serving. Port 0 picks a free port, returned on success.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Blocks until Stop() is called.
  absl::Status Serve();
  // Returns once Serve() is accepting connections.
  void WaitUntilReady() const;
  void Stop();

 private:
  const ReviewService* const service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace sonoreport

#endif  // SONOREPORT_HTTP_SERVER_H_
