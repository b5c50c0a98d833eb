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

// Native build of the five workflow steps. Every function here runs the same
// kernels (wasmflow/kernels/steps.h) that are compiled into the wasm guests,
// so this library doubles as the correctness oracle for the guests.

#ifndef WASMFLOW_STEPS_STEPS_H_
#define WASMFLOW_STEPS_STEPS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/common/util.h"
#include "wasmflow/kernels/steps.h"
#include "wasmflow/payload/payload.h"

namespace wasmflow::steps {

using kernels::ElementKind;
using kernels::wire::StepKind;
using kernels::wire::StepRef;

// Matrix dimension for a size class: d = sqrt(byte_size / 4).
int DOf(payload::SizeLabel size);

struct DataFrame {
  uint32_t schema_version = kernels::wire::kFrameSchemaVersion;
  ElementKind element_kind = ElementKind::kU8;
  Bytes payload;
  std::optional<uint32_t> checksum;

  friend bool operator==(const DataFrame&, const DataFrame&) = default;
};

Bytes EncodeDataFrame(const DataFrame& frame);
absl::StatusOr<DataFrame> DecodeDataFrame(ByteSpan bytes);

struct MatrixBlock {
  uint32_t dim_d = 0;
  uint32_t rows_from = 0;
  uint32_t rows_to = 0;
  std::vector<float> values;  // (rows_to - rows_from) x dim_d, row-major
};

Bytes EncodeMatrixBlock(const MatrixBlock& block);
absl::StatusOr<MatrixBlock> DecodeMatrixBlock(ByteSpan bytes);

std::vector<float> FloatsFromLe(ByteSpan bytes);
Bytes FloatsToLe(std::span<const float> values);

// S1: decodes a u8 DataFrame and populates its CRC32.
absl::StatusOr<DataFrame> Ingest(ByteSpan frame_bytes);

// S2: u8 frame to an f32 frame of the same byte length.
absl::StatusOr<DataFrame> Preprocess(const DataFrame& frame);

// S3: C_k = A_k x A for the strip carried by `block_input` (its values are the
// rows [rows_from, rows_to) of `full_matrix`).
absl::StatusOr<MatrixBlock> MapBlock(const MatrixBlock& block_input,
                                     std::span<const float> full_matrix);

struct Reduced {
  uint32_t dim_d = 0;
  std::vector<float> values;
  Digest256 digest{};
};

// S4: assembles strips by row offset and digests the little-endian result.
absl::StatusOr<Reduced> Reduce(std::span<const MatrixBlock> blocks);

struct Finalized {
  DataFrame frame;
  Bytes encoded_frame;
  Digest256 digest{};
  std::optional<bool> verified;
};

// S5: encodes the final DataFrame and digests the encoding.
absl::StatusOr<Finalized> Finalize(std::span<const float> result,
                                   std::optional<Digest256> expected);

// Maps a kernel error to a status carrying the error kind name.
absl::Status StepErrorToStatus(kernels::StepError error, const char* detail);

// Heap-backed arena satisfying the kernels' Arena contract.
class HeapArena {
 public:
  uint8_t* Allocate(size_t n);

 private:
  struct Free {
    void operator()(uint8_t* p) const;
  };
  std::vector<std::unique_ptr<uint8_t, Free>> blocks_;
};

// Byte-level step: the step's input payload to its output payload.
absl::StatusOr<Bytes> RunStep(StepRef step, ByteSpan payload);

// Exactly what a guest's run() does: InvokeFrame bytes to ResultFrame bytes.
Bytes HandleInvoke(ByteSpan invoke_frame);

}  // namespace wasmflow::steps

#endif  // WASMFLOW_STEPS_STEPS_H_
