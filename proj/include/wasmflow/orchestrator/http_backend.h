// Copyright 2026 The wasmflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Backend speaking to an executor shim over HTTP/1.1.

#ifndef WASMFLOW_ORCHESTRATOR_HTTP_BACKEND_H_
#define WASMFLOW_ORCHESTRATOR_HTTP_BACKEND_H_

#include <chrono>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "wasmflow/orchestrator/backend.h"
#include "wasmflow/protocol/multipart.h"

namespace wasmflow::orchestrator {

class HttpBackend : public Backend {
 public:
  // `base_url` is "http://host:port". Payloads of at least
  // `multipart_threshold` bytes travel as a separate multipart part.
  static absl::StatusOr<std::unique_ptr<HttpBackend>> Create(
      std::string name, std::string base_url, std::chrono::milliseconds timeout,
      size_t multipart_threshold = protocol::kDefaultMultipartThreshold);

  std::string Name() const override { return name_; }
  absl::StatusOr<ResultFrame> Invoke(const InvokeFrame& frame,
                                     const InvocationSettings& settings) override;
  absl::Status ResetPool() override;
  absl::Status Health() override;

 private:
  HttpBackend(std::string name, std::string base_url, std::chrono::milliseconds timeout,
              size_t multipart_threshold)
      : name_(std::move(name)),
        base_url_(std::move(base_url)),
        timeout_(timeout),
        multipart_threshold_(multipart_threshold) {}

  const std::string name_;
  const std::string base_url_;
  const std::chrono::milliseconds timeout_;
  const size_t multipart_threshold_;
};

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_HTTP_BACKEND_H_
