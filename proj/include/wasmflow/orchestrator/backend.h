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

// Transport-neutral handle to an execution environment.

#ifndef WASMFLOW_ORCHESTRATOR_BACKEND_H_
#define WASMFLOW_ORCHESTRATOR_BACKEND_H_

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "wasmflow/protocol/frames.h"
#include "wasmflow/protocol/settings.h"

namespace wasmflow::orchestrator {

using protocol::InvokeFrame;
using protocol::ResultFrame;
using protocol::StepKind;
using protocol::StepRef;

struct InvocationSettings {
  protocol::CompileMode mode = protocol::CompileMode::kJit;
  protocol::StatePolicy state = protocol::StatePolicy::kWarmPool;
};

// Implementations are safe for concurrent Invoke calls.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string Name() const = 0;

  // Returns the executor's result frame, which may itself report a step error.
  // BackendUnavailable when the transport fails.
  virtual absl::StatusOr<ResultFrame> Invoke(const InvokeFrame& frame,
                                             const InvocationSettings& settings) = 0;

  // Forces subsequent invocations to start cold.
  virtual absl::Status ResetPool() = 0;

  // BackendUnavailable when the environment cannot serve requests.
  virtual absl::Status Health() = 0;
};

using BackendMap = std::map<std::string, Backend*>;

struct EndpointConfig {
  std::string transport;  // "http" | "bridge"
  std::string endpoint;   // http://host:port or host:port to listen on
  std::chrono::milliseconds timeout{130000};
};

// Creates the backend for an environment entry of the campaign config.
absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(const std::string& name,
                                                     const EndpointConfig& config);

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_BACKEND_H_
