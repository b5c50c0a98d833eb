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

// Two-part encoding of an InvokeFrame for multipart/form-data transport.
// Large payloads travel as raw bytes in the `payload` field; the `meta` field
// holds the frame without its payload plus payload_ref {len, blake3}.

#ifndef WASMFLOW_PROTOCOL_MULTIPART_H_
#define WASMFLOW_PROTOCOL_MULTIPART_H_

#include <cstddef>
#include <optional>

#include "absl/status/statusor.h"
#include "wasmflow/common/util.h"
#include "wasmflow/protocol/frames.h"

namespace wasmflow::protocol {

inline constexpr size_t kDefaultMultipartThreshold = 64 * 1024;
inline constexpr char kMetaField[] = "meta";
inline constexpr char kPayloadField[] = "payload";

struct MultipartParts {
  Bytes meta;
  std::optional<Bytes> payload;
};

// Payloads of at least `threshold` bytes (minimum 1) are split out.
MultipartParts SplitMultipart(const InvokeFrame& frame,
                              size_t threshold = kDefaultMultipartThreshold);

// Inverse of SplitMultipart. PayloadDigestMismatch when the payload part
// disagrees with the meta part's reference.
absl::StatusOr<InvokeFrame> JoinMultipart(ByteSpan meta,
                                          std::optional<ByteSpan> payload);

}  // namespace wasmflow::protocol

#endif  // WASMFLOW_PROTOCOL_MULTIPART_H_
