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

// In-process backend with a fixed completion time per step. Outputs are the
// real native step outputs, so workflows verify end to end.

#ifndef WASMFLOW_ORCHESTRATOR_STUB_BACKEND_H_
#define WASMFLOW_ORCHESTRATOR_STUB_BACKEND_H_

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wasmflow/orchestrator/backend.h"

namespace wasmflow::orchestrator {

struct StubOptions {
  // Completion time of every invocation, measured from its arrival.
  std::chrono::microseconds delay{0};
  // Per-step-kind override of `delay`.
  std::map<StepKind, std::chrono::microseconds> step_delay;
  // Startup phase reported by a cold invocation (included in the delay).
  std::chrono::microseconds cold_startup{0};
  // When set, invocations of this step return a StepTrap error frame.
  std::optional<StepKind> fail_step;
  // When false, Health() reports BackendUnavailable.
  bool healthy = true;
};

struct StubInvocation {
  std::string run_id;
  StepRef step;
  InvocationSettings settings;
  int64_t start_us = 0;
  int64_t end_us = 0;
};

class StubBackend : public Backend {
 public:
  explicit StubBackend(std::string name, StubOptions options = {})
      : name_(std::move(name)), options_(std::move(options)) {}

  std::string Name() const override { return name_; }
  absl::StatusOr<ResultFrame> Invoke(const InvokeFrame& frame,
                                     const InvocationSettings& settings) override;
  absl::Status ResetPool() override;
  absl::Status Health() override;

  std::vector<StubInvocation> invocations() const;
  int reset_count() const;
  // Highest number of simultaneously running invocations seen.
  int max_in_flight() const;

 private:
  std::chrono::microseconds DelayOf(StepKind kind) const;

  const std::string name_;
  const StubOptions options_;

  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, Bytes> output_cache_;  // guarded by mu_
  std::set<std::string> warm_;                                          // guarded by mu_
  std::vector<StubInvocation> invocations_;                             // guarded by mu_
  int resets_ = 0;                                                      // guarded by mu_
  int in_flight_ = 0;                                                   // guarded by mu_
  int max_in_flight_ = 0;                                               // guarded by mu_
};

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_STUB_BACKEND_H_
