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

#include "wasmflow/orchestrator/stub_backend.h"

#include <algorithm>
#include <thread>

#include "wasmflow/common/errors.h"
#include "wasmflow/steps/steps.h"

namespace wasmflow::orchestrator {

std::chrono::microseconds StubBackend::DelayOf(StepKind kind) const {
  auto it = options_.step_delay.find(kind);
  return it == options_.step_delay.end() ? options_.delay : it->second;
}

absl::StatusOr<ResultFrame> StubBackend::Invoke(const InvokeFrame& frame,
                                                const InvocationSettings& settings) {
  const auto arrival = std::chrono::steady_clock::now();
  const int64_t start_us = MonotonicMicros();
  const std::string step_name = protocol::StepIdName(frame.step_id);
  const std::string payload_key = ToHex(Blake3Digest(frame.payload));

  std::optional<Bytes> cached;
  bool cold = true;
  {
    std::lock_guard<std::mutex> lock(mu_);
    max_in_flight_ = std::max(max_in_flight_, ++in_flight_);
    auto it = output_cache_.find({step_name, payload_key});
    if (it != output_cache_.end()) cached = it->second;
    if (settings.state == protocol::StatePolicy::kWarmPool) {
      cold = warm_.insert(step_name).second;
    }
  }

  ResultFrame result;
  if (options_.fail_step == frame.step_id.kind) {
    result = protocol::ErrorResult(error_kind::kStepTrap, "stub failure");
  } else if (cached) {
    result.payload = *std::move(cached);
  } else {
    auto output = steps::RunStep(frame.step_id, frame.payload);
    if (output.ok()) {
      result.payload = *output;
      std::lock_guard<std::mutex> lock(mu_);
      output_cache_[{step_name, payload_key}] = *std::move(output);
    } else {
      result = protocol::ErrorResult(ErrorKindOf(output.status()), ErrorDetailOf(output.status()));
    }
  }

  const auto delay = DelayOf(frame.step_id.kind);
  std::this_thread::sleep_until(arrival + delay);
  const int64_t end_us = MonotonicMicros();

  const int64_t startup_us =
      cold ? std::min<int64_t>(options_.cold_startup.count(), end_us - start_us) : 0;
  protocol::PhaseBreakdown phases;
  phases.compile_us = startup_us;
  phases.execute_us = end_us - start_us - startup_us;
  result.run_id = frame.run_id;
  result.step_id = frame.step_id;
  result.instance = cold ? protocol::InstanceState::kCold : protocol::InstanceState::kWarm;
  result.phase_breakdown = phases;
  result.total_us = end_us - start_us;
  result.resource_samples = std::vector<protocol::ResourceSample>{};
  result.resource_best_effort = true;

  std::lock_guard<std::mutex> lock(mu_);
  --in_flight_;
  invocations_.push_back(StubInvocation{frame.run_id, frame.step_id, settings, start_us, end_us});
  return result;
}

absl::Status StubBackend::ResetPool() {
  std::lock_guard<std::mutex> lock(mu_);
  warm_.clear();
  ++resets_;
  return absl::OkStatus();
}

absl::Status StubBackend::Health() {
  if (!options_.healthy) {
    return MakeError(absl::StatusCode::kUnavailable, error_kind::kBackendUnavailable,
                     "stub configured unhealthy");
  }
  return absl::OkStatus();
}

std::vector<StubInvocation> StubBackend::invocations() const {
  std::lock_guard<std::mutex> lock(mu_);
  return invocations_;
}

int StubBackend::reset_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return resets_;
}

int StubBackend::max_in_flight() const {
  std::lock_guard<std::mutex> lock(mu_);
  return max_in_flight_;
}

}  // namespace wasmflow::orchestrator
