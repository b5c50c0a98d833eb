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

// Campaign cells and the per-run timing record, with their line-delimited
// JSON log form.

#ifndef WASMFLOW_ORCHESTRATOR_RECORD_H_
#define WASMFLOW_ORCHESTRATOR_RECORD_H_

#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/payload/payload.h"
#include "wasmflow/protocol/frames.h"
#include "wasmflow/protocol/settings.h"

namespace wasmflow::orchestrator {

using protocol::CompileMode;
using protocol::InstanceState;
using protocol::PhaseBreakdown;
using protocol::ResourceSample;
using protocol::StatePolicy;

struct CellSpec {
  std::string env;
  payload::SizeLabel payload = payload::SizeLabel::kSmall;
  CompileMode mode = CompileMode::kJit;
  StatePolicy state = StatePolicy::kWarmPool;

  // "<env>/<payload>/<mode>/<state>", e.g. "edge/small/jit/warm".
  std::string Id() const;
  friend bool operator==(const CellSpec&, const CellSpec&) = default;
};

absl::StatusOr<CellSpec> ParseCellId(std::string_view id);

struct StepSpan {
  protocol::StepRef step;
  int64_t start_us = 0;  // monotonic, at dispatch
  int64_t end_us = 0;    // monotonic, at result arrival
  std::optional<PhaseBreakdown> phases;
  std::optional<InstanceState> instance;
  std::optional<int64_t> executor_total_us;
  std::vector<ResourceSample> resource_samples;
  bool resource_best_effort = false;

  int64_t Duration() const { return end_us - start_us; }
  friend bool operator==(const StepSpan&, const StepSpan&) = default;
};

enum class Verification : uint8_t { kOk, kFail, kSkipped };
std::string_view VerificationName(Verification v);

struct RunRecord {
  std::string run_id;
  CellSpec cell;
  int repetition = 0;
  uint64_t seed = payload::kDefaultSeed;
  std::vector<StepSpan> spans;  // in dispatch order
  int64_t makespan_us = 0;      // last span end − first span start
  InstanceState state_observed = InstanceState::kCold;
  Verification verification = Verification::kSkipped;
  std::optional<std::string> final_digest;  // hex
  std::optional<std::string> discard_reason;

  bool Discarded() const { return discard_reason.has_value(); }
  const StepSpan* SpanOf(protocol::StepRef step) const;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

std::string RecordToJsonLine(const RunRecord& record);  // no trailing newline
// CorruptLog on malformed input.
absl::StatusOr<RunRecord> RecordFromJsonLine(std::string_view line);

struct ReadLogOptions {
  // Skip an unterminated, unparseable final line (a crashed writer).
  bool ignore_partial_tail = false;
};

// CorruptLog naming the 1-based line number on malformed input.
absl::StatusOr<std::vector<RunRecord>> ReadRecordLog(const std::string& path,
                                                     const ReadLogOptions& options = {});

// Destination for completed records.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual absl::Status Append(const RunRecord& record) = 0;
};

// Appends one JSON line per record and flushes it immediately.
class JsonlRecordSink : public RecordSink {
 public:
  static absl::StatusOr<std::unique_ptr<JsonlRecordSink>> Open(const std::string& path);
  absl::Status Append(const RunRecord& record) override;

 private:
  explicit JsonlRecordSink(std::ofstream out) : out_(std::move(out)) {}

  std::mutex mu_;
  std::ofstream out_;
};

class MemoryRecordSink : public RecordSink {
 public:
  absl::Status Append(const RunRecord& record) override;
  const std::vector<RunRecord>& records() const { return records_; }

 private:
  std::vector<RunRecord> records_;
};

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_RECORD_H_
