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

// Backend that forwards frames over a WebSocket to a connected harness
// (e.g. a browser page). The orchestrator listens; the harness connects.
//
// Every binary message is one CBOR frame. Invoke frames go out; result frames
// come back carrying the same run_id and step_id, in any order. A control
// frame {op: "reset", run_id} is answered by an identical control frame once
// the harness has dropped its instances.

#ifndef WASMFLOW_ORCHESTRATOR_BRIDGE_BACKEND_H_
#define WASMFLOW_ORCHESTRATOR_BRIDGE_BACKEND_H_

#include <chrono>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "wasmflow/orchestrator/backend.h"

namespace wasmflow::orchestrator {

inline constexpr size_t kBridgeMaxMessageBytes = 256u << 20;

class BridgeBackend : public Backend {
 public:
  // Listens on `host`:`port` (0 picks a free port). One harness connection is
  // served at a time; a newer connection replaces the older one.
  // `connect_wait` bounds how long Health() waits for a harness to connect.
  static absl::StatusOr<std::unique_ptr<BridgeBackend>> Listen(
      std::string name, const std::string& host, int port, std::chrono::milliseconds timeout,
      std::chrono::milliseconds connect_wait = std::chrono::seconds(30));
  ~BridgeBackend() override;

  int port() const;

  // Blocks until a harness is connected; BackendUnavailable on timeout.
  absl::Status WaitForPeer(std::chrono::milliseconds wait);

  std::string Name() const override;
  absl::StatusOr<ResultFrame> Invoke(const InvokeFrame& frame,
                                     const InvocationSettings& settings) override;
  absl::Status ResetPool() override;
  absl::Status Health() override;

  struct Impl;

 private:
  explicit BridgeBackend(std::unique_ptr<Impl> impl);

  std::unique_ptr<Impl> impl_;
};

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_BRIDGE_BACKEND_H_
