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

#include "wasmflow/steps/workflow.h"

#include <cstring>
#include <string_view>

#include "wasmflow/common/errors.h"
#include "wasmflow/kernels/cbor.h"
#include "wasmflow/kernels/crc32.h"
#include "wasmflow/kernels/wire.h"
#include "wasmflow/steps/steps.h"

namespace wasmflow::steps {

namespace cbor = ::wasmflow::kernels::cbor;
namespace wire = ::wasmflow::kernels::wire;

namespace {

absl::Status Malformed(std::string_view detail) {
  return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kMalformedFrame, detail);
}

// Finds a top-level key of a CBOR map and positions `r` on its value.
bool SeekKey(cbor::Reader& r, const char* want) {
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return false;
    if (cbor::Equals(key, want)) return true;
    if (!r.Skip()) return false;
  }
  return false;
}

struct GoldenEntry {
  uint64_t seed;
  const char* size;
  const char* digest_hex;
};

constexpr GoldenEntry kGolden[] = {
#include "golden_digests.inc"
};

}  // namespace

Bytes MakeIngestInput(ByteSpan raw) {
  DataFrame frame;
  frame.element_kind = ElementKind::kU8;
  frame.payload.assign(raw.begin(), raw.end());
  frame.checksum = kernels::Crc32(raw.data(), raw.size());
  return EncodeDataFrame(frame);
}

Bytes MakeReduceInput(std::span<const Bytes> s3_outputs) {
  size_t total = cbor::HeadSize(s3_outputs.size());
  for (const Bytes& b : s3_outputs) total += b.size();
  Bytes out(total);
  cbor::Writer w(out.data(), out.size());
  w.ArrayHeader(s3_outputs.size());
  for (const Bytes& b : s3_outputs) w.Raw(b.data(), b.size());
  return out;
}

absl::StatusOr<Bytes> MakeFinalizeInput(ByteSpan s4_output,
                                        const std::optional<Digest256>& expected) {
  cbor::Reader r(s4_output.data(), s4_output.size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("reduce output is not a CBOR map");
  if (!expected) return Bytes(s4_output.begin(), s4_output.end());
  ByteSpan body = s4_output.subspan(r.position());
  size_t key_size = cbor::HeadSize(std::strlen(wire::kExpected)) + std::strlen(wire::kExpected);
  size_t total = cbor::HeadSize(n + 1) + body.size() + key_size + cbor::HeadSize(32) + 32;
  Bytes out(total);
  cbor::Writer w(out.data(), out.size());
  w.MapHeader(n + 1);
  w.Raw(body.data(), body.size());
  w.Text(wire::kExpected);
  w.ByteString(expected->data(), expected->size());
  return out;
}

absl::StatusOr<Digest256> FinalDigestOf(ByteSpan s5_output) {
  cbor::Reader r(s5_output.data(), s5_output.size());
  cbor::Bytes digest;
  if (!SeekKey(r, wire::kDigest) || !r.ReadBytes(&digest) || digest.size != 32) {
    return Malformed("final output has no 32-byte digest");
  }
  Digest256 out;
  std::memcpy(out.data(), digest.data, 32);
  return out;
}

std::optional<bool> FinalVerifiedOf(ByteSpan s5_output) {
  cbor::Reader r(s5_output.data(), s5_output.size());
  bool v;
  if (!SeekKey(r, wire::kVerified) || !r.ReadBool(&v)) return std::nullopt;
  return v;
}

absl::StatusOr<PipelineResult> RunNativePipeline(ByteSpan raw,
                                                 const std::optional<Digest256>& expected) {
  Bytes s1_in = MakeIngestInput(raw);
  auto s1 = RunStep({StepKind::kS1, -1}, s1_in);
  if (!s1.ok()) return s1.status();
  auto s2 = RunStep({StepKind::kS2, -1}, *s1);
  if (!s2.ok()) return s2.status();
  std::vector<Bytes> blocks;
  for (int k = 0; k < wire::kFanOut; ++k) {
    auto s3 = RunStep({StepKind::kS3, k}, *s2);
    if (!s3.ok()) return s3.status();
    blocks.push_back(*std::move(s3));
  }
  auto s4 = RunStep({StepKind::kS4, -1}, MakeReduceInput(blocks));
  if (!s4.ok()) return s4.status();
  auto s5_in = MakeFinalizeInput(*s4, expected);
  if (!s5_in.ok()) return s5_in.status();
  auto s5 = RunStep({StepKind::kS5, -1}, *s5_in);
  if (!s5.ok()) return s5.status();
  auto digest = FinalDigestOf(*s5);
  if (!digest.ok()) return digest.status();
  return PipelineResult{*digest, *std::move(s5)};
}

std::optional<Digest256> GoldenDigest(uint64_t seed, payload::SizeLabel size) {
  for (const GoldenEntry& e : kGolden) {
    if (e.seed == seed && payload::SizeLabelName(size) == e.size) {
      return DigestFromHex(e.digest_hex);
    }
  }
  return std::nullopt;
}

}  // namespace wasmflow::steps
