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

// HTTP/1.1 front end of the executor.
//
//   POST /invoke[?mode=jit|aot&state=cold|warm]
//        body: application/cbor InvokeFrame, or multipart/form-data with
//        `meta` (CBOR) and `payload` (raw bytes) parts.
//        200 with a CBOR ResultFrame for every processed invocation (including
//        step errors), 400 for undecodable requests, 503 on PoolExhausted.
//   POST /pool/reset        destroys pooled instances
//   GET  /healthz           JSON engine and configuration summary
//   GET  /artifacts/sizes   JSON list of artifact size entries

#ifndef WASMFLOW_EXECUTOR_SHIM_SERVER_H_
#define WASMFLOW_EXECUTOR_SHIM_SERVER_H_

#include <memory>
#include <string>
#include <thread>

#include "absl/status/statusor.h"
#include "wasmflow/executor/executor.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace wasmflow::executor {

inline constexpr char kCborContentType[] = "application/cbor";

// JSON form of the size report, shared by the shim and the CLI.
std::string ArtifactSizesJson(const std::vector<ArtifactSizeEntry>& entries);

class ShimServer {
 public:
  explicit ShimServer(Executor& executor);
  ~ShimServer();

  ShimServer(const ShimServer&) = delete;
  ShimServer& operator=(const ShimServer&) = delete;

  // Binds and starts serving on a background thread. Port 0 picks a free
  // port. Returns the bound port.
  absl::StatusOr<int> Start(const std::string& host, int port);

  // Blocks serving on the calling thread until Stop().
  absl::Status Run(const std::string& host, int port);

  void Stop();

 private:
  void Install();

  Executor& executor_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace wasmflow::executor

#endif  // WASMFLOW_EXECUTOR_SHIM_SERVER_H_
