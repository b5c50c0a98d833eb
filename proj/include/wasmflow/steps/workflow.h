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

// Data plumbing between steps, shared by the orchestrator and the native
// oracle pipeline so both feed the steps identical bytes.

#ifndef WASMFLOW_STEPS_WORKFLOW_H_
#define WASMFLOW_STEPS_WORKFLOW_H_

#include <cstdint>
#include <optional>
#include <span>

#include "absl/status/statusor.h"
#include "wasmflow/common/util.h"
#include "wasmflow/payload/payload.h"

namespace wasmflow::steps {

// S1 input: a u8 DataFrame over `raw` whose envelope carries its CRC32.
Bytes MakeIngestInput(ByteSpan raw);

// S4 input: a CBOR array of the S3 output blocks, in the given order.
Bytes MakeReduceInput(std::span<const Bytes> s3_outputs);

// S5 input: the S4 output map, plus an `expected` final digest when given.
absl::StatusOr<Bytes> MakeFinalizeInput(ByteSpan s4_output,
                                        const std::optional<Digest256>& expected);

// The `digest` field of an S5 output.
absl::StatusOr<Digest256> FinalDigestOf(ByteSpan s5_output);

// The `verified` field of an S5 output, if present.
std::optional<bool> FinalVerifiedOf(ByteSpan s5_output);

struct PipelineResult {
  Digest256 final_digest{};
  Bytes final_output;
};

// S1 -> S2 -> S3[0..3] -> S4 -> S5 in-process, via the byte-level steps.
absl::StatusOr<PipelineResult> RunNativePipeline(
    ByteSpan raw, const std::optional<Digest256>& expected = std::nullopt);

// Committed final digests for seeds {1, 42} x all size classes.
std::optional<Digest256> GoldenDigest(uint64_t seed, payload::SizeLabel size);

}  // namespace wasmflow::steps

#endif  // WASMFLOW_STEPS_WORKFLOW_H_
