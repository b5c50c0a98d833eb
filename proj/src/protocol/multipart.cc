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

#include "wasmflow/protocol/multipart.h"

#include <algorithm>
#include <string>

#include "canonical_map.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/kernels/cbor.h"

namespace wasmflow::protocol {

namespace cbor = ::wasmflow::kernels::cbor;
namespace wire = ::wasmflow::kernels::wire;
using internal::CanonicalMap;

namespace {

constexpr char kRefLen[] = "len";
constexpr char kRefBlake3[] = "blake3";

absl::Status Malformed(std::string_view detail) {
  return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kMalformedFrame, detail);
}

absl::Status Mismatch(std::string_view detail) {
  return MakeError(absl::StatusCode::kDataLoss, error_kind::kPayloadDigestMismatch, detail);
}

struct PayloadRef {
  uint64_t len = 0;
  Digest256 blake3{};
};

bool DecodeRef(cbor::Reader& r, PayloadRef* ref) {
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return false;
  bool has_len = false, has_digest = false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return false;
    if (cbor::Equals(key, kRefLen)) {
      if (!r.ReadUint(&ref->len)) return false;
      has_len = true;
    } else if (cbor::Equals(key, kRefBlake3)) {
      cbor::Bytes d;
      if (!r.ReadBytes(&d) || d.size != 32) return false;
      std::copy(d.data, d.data + 32, ref->blake3.begin());
      has_digest = true;
    } else if (!r.Skip()) {
      return false;
    }
  }
  return has_len && has_digest;
}

}  // namespace

MultipartParts SplitMultipart(const InvokeFrame& frame, size_t threshold) {
  threshold = std::max<size_t>(threshold, 1);
  MultipartParts parts;
  if (frame.payload.size() < threshold) {
    parts.meta = EncodeFrame(frame);
    return parts;
  }
  Digest256 digest = Blake3Digest(frame.payload);
  CanonicalMap ref;
  ref.Uint(kRefLen, frame.payload.size());
  ref.ByteString(kRefBlake3, digest);
  CanonicalMap meta;
  meta.Text(wire::kOp, wire::kOpInvoke);
  meta.Text(wire::kStepId, StepIdName(frame.step_id));
  meta.Text(wire::kRunId, frame.run_id);
  meta.Encoded(wire::kPayloadRef, ref.Finish());
  parts.meta = meta.Finish();
  parts.payload = frame.payload;
  return parts;
}

absl::StatusOr<InvokeFrame> JoinMultipart(ByteSpan meta, std::optional<ByteSpan> payload) {
  if (!payload) return DecodeInvokeFrame(meta);

  // Re-read the meta part: locate payload_ref and decode the rest as a frame
  // with an empty inline payload.
  cbor::Reader r(meta.data(), meta.size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("meta part is not a CBOR map");
  PayloadRef ref;
  bool has_ref = false;
  CanonicalMap rebuilt;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("meta key is not text");
    std::string key_str(reinterpret_cast<const char*>(key.data), key.size);
    if (key_str == wire::kPayloadRef) {
      if (!DecodeRef(r, &ref)) return Malformed("invalid payload_ref");
      has_ref = true;
    } else if (key_str == wire::kPayload) {
      return Malformed("meta part carries both payload and a payload part");
    } else {
      cbor::Bytes item;
      if (!r.ReadRawItem(&item)) return Malformed("meta part is truncated");
      rebuilt.Encoded(key_str, Bytes(item.data, item.data + item.size));
    }
  }
  if (!r.AtEnd()) return Malformed("trailing bytes after meta part");
  if (!has_ref) return Malformed("payload part present but meta has no payload_ref");
  if (ref.len != payload->size()) {
    return Mismatch("payload part length " + std::to_string(payload->size()) +
                    " differs from reference " + std::to_string(ref.len));
  }
  if (Blake3Digest(*payload) != ref.blake3) {
    return Mismatch("payload part BLAKE3 differs from reference");
  }
  rebuilt.ByteString(wire::kPayload, ByteSpan{});
  auto frame = DecodeInvokeFrame(rebuilt.Finish());
  if (!frame.ok()) return frame.status();
  frame->payload.assign(payload->begin(), payload->end());
  return frame;
}

}  // namespace wasmflow::protocol
