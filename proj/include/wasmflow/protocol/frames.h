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

// The invocation envelope shared by every backend: InvokeFrame and
// ResultFrame as canonical CBOR maps.
//
//   InvokeFrame  {op:"invoke", step_id, run_id, payload}
//   ResultFrame  {op:"result", status, payload | error{code,message},
//                 [run_id, step_id, total_us, instance, phase_breakdown,
//                  resource_samples, resource_best_effort]}
//   ControlFrame {op:"reset", run_id}   (browser bridge only)
//
// Unknown keys are skipped on decode.

#ifndef WASMFLOW_PROTOCOL_FRAMES_H_
#define WASMFLOW_PROTOCOL_FRAMES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/common/util.h"
#include "wasmflow/kernels/wire.h"

namespace wasmflow::protocol {

using StepRef = kernels::wire::StepRef;
using StepKind = kernels::wire::StepKind;

std::string StepIdName(StepRef step);
// "S1".."S5": the step kind without a fan-out branch suffix.
std::string StepKindName(StepKind kind);
std::optional<StepKind> ParseStepKindName(std::string_view name);
absl::StatusOr<StepRef> ParseStepId(std::string_view name);

// All eight step ids of the benchmark DAG, in topological order.
const std::vector<StepRef>& AllStepIds();

struct PhaseBreakdown {
  int64_t load_us = 0;
  int64_t compile_us = 0;
  int64_t instantiate_us = 0;
  int64_t init_us = 0;
  int64_t execute_us = 0;

  int64_t Startup() const { return load_us + compile_us + instantiate_us + init_us; }
  int64_t Sum() const { return Startup() + execute_us; }
  friend bool operator==(const PhaseBreakdown&, const PhaseBreakdown&) = default;
};

struct ResourceSample {
  int64_t t_us = 0;  // monotonic
  double cpu_pct = 0.0;
  uint64_t rss_bytes = 0;
  friend bool operator==(const ResourceSample&, const ResourceSample&) = default;
};

struct FrameError {
  std::string code;
  std::string message;
  friend bool operator==(const FrameError&, const FrameError&) = default;
};

enum class ResultStatus : uint8_t { kOk, kError };
enum class InstanceState : uint8_t { kCold, kWarm };

std::string_view InstanceStateName(InstanceState state);

struct InvokeFrame {
  StepRef step_id;
  std::string run_id;
  Bytes payload;
  friend bool operator==(const InvokeFrame&, const InvokeFrame&) = default;
};

struct ResultFrame {
  ResultStatus status = ResultStatus::kOk;
  Bytes payload;
  std::optional<FrameError> error;
  std::optional<std::string> run_id;
  std::optional<StepRef> step_id;
  std::optional<int64_t> total_us;
  std::optional<InstanceState> instance;
  std::optional<PhaseBreakdown> phase_breakdown;
  std::optional<std::vector<ResourceSample>> resource_samples;
  bool resource_best_effort = false;
  friend bool operator==(const ResultFrame&, const ResultFrame&) = default;
};

struct ControlFrame {
  std::string op;
  std::string run_id;
  friend bool operator==(const ControlFrame&, const ControlFrame&) = default;
};

Bytes EncodeFrame(const InvokeFrame& frame);
Bytes EncodeFrame(const ResultFrame& frame);
Bytes EncodeFrame(const ControlFrame& frame);

absl::StatusOr<InvokeFrame> DecodeInvokeFrame(ByteSpan bytes);
absl::StatusOr<ResultFrame> DecodeResultFrame(ByteSpan bytes);
absl::StatusOr<ControlFrame> DecodeControlFrame(ByteSpan bytes);

// The `op` value of any frame.
absl::StatusOr<std::string> PeekOp(ByteSpan bytes);

ResultFrame ErrorResult(std::string_view code, std::string_view message);

// OK for status=ok; otherwise an error status of kind `error.code`.
absl::Status ResultStatusOf(const ResultFrame& frame);

}  // namespace wasmflow::protocol

#endif  // WASMFLOW_PROTOCOL_FRAMES_H_
