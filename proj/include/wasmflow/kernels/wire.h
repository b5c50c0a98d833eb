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

// Wire vocabulary shared by the guests, the shim, the orchestrator and the
// browser bridge. Key names are normative for interop.

#ifndef WASMFLOW_KERNELS_WIRE_H_
#define WASMFLOW_KERNELS_WIRE_H_

#include <stddef.h>
#include <stdint.h>

#include "wasmflow/kernels/cbor.h"

namespace wasmflow::kernels::wire {

// Invocation envelope.
inline constexpr char kOp[] = "op";
inline constexpr char kStepId[] = "step_id";
inline constexpr char kRunId[] = "run_id";
inline constexpr char kPayload[] = "payload";
inline constexpr char kStatus[] = "status";
inline constexpr char kError[] = "error";
inline constexpr char kPayloadRef[] = "payload_ref";
inline constexpr char kPhaseBreakdown[] = "phase_breakdown";
inline constexpr char kResourceSamples[] = "resource_samples";
inline constexpr char kTotalUs[] = "total_us";
inline constexpr char kInstance[] = "instance";

inline constexpr char kOpInvoke[] = "invoke";
inline constexpr char kOpResult[] = "result";
inline constexpr char kOpReset[] = "reset";
inline constexpr char kStatusOk[] = "ok";
inline constexpr char kStatusError[] = "error";

// Structured error.
inline constexpr char kErrorCode[] = "code";
inline constexpr char kErrorMessage[] = "message";

// DataFrame.
inline constexpr char kFrameData[] = "data";
inline constexpr char kFrameKind[] = "kind";
inline constexpr char kFrameCrc32[] = "crc32";
inline constexpr char kFrameVersion[] = "version";
inline constexpr uint64_t kFrameSchemaVersion = 1;

// MatrixBlock.
inline constexpr char kBlockDim[] = "d";
inline constexpr char kBlockTo[] = "to";
inline constexpr char kBlockFrom[] = "from";
inline constexpr char kBlockValues[] = "values";

// Reduced result (S4 output, S5 input) and final frame (S5 output).
inline constexpr char kDigest[] = "digest";
inline constexpr char kExpected[] = "expected";
inline constexpr char kFinalFrame[] = "frame";
inline constexpr char kVerified[] = "verified";

enum class StepKind : uint8_t { kS1 = 1, kS2 = 2, kS3 = 3, kS4 = 4, kS5 = 5 };

inline constexpr int kFanOut = 4;

// "S1", "S2", "S3[0]".."S3[3]", "S4", "S5". Branch is -1 except for S3.
struct StepRef {
  StepKind kind = StepKind::kS1;
  int branch = -1;

  friend constexpr bool operator==(const StepRef&, const StepRef&) = default;
};

inline bool ParseStepRef(cbor::Bytes text, StepRef* out) {
  if (text.size < 2 || text.data[0] != 'S') return false;
  uint8_t digit = text.data[1];
  if (digit < '1' || digit > '5') return false;
  StepKind kind = static_cast<StepKind>(digit - '0');
  if (kind == StepKind::kS3) {
    if (text.size != 5 || text.data[2] != '[' || text.data[4] != ']') return false;
    uint8_t b = text.data[3];
    if (b < '0' || b >= '0' + kFanOut) return false;
    *out = StepRef{kind, b - '0'};
    return true;
  }
  if (text.size != 2) return false;
  *out = StepRef{kind, -1};
  return true;
}

// Writes the canonical text form into `buf` (at least 6 bytes); returns length.
inline size_t FormatStepRef(StepRef ref, char* buf) {
  buf[0] = 'S';
  buf[1] = static_cast<char>('0' + static_cast<int>(ref.kind));
  if (ref.kind != StepKind::kS3) return 2;
  buf[2] = '[';
  buf[3] = static_cast<char>('0' + ref.branch);
  buf[4] = ']';
  return 5;
}

}  // namespace wasmflow::kernels::wire

#endif  // WASMFLOW_KERNELS_WIRE_H_
