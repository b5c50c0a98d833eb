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

#include "wasmflow/steps/steps.h"

#include <cstring>
#include <new>

#include "absl/status/status.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::steps {

namespace k = ::wasmflow::kernels;
namespace cbor = ::wasmflow::kernels::cbor;
namespace wire = ::wasmflow::kernels::wire;

namespace {

cbor::Bytes View(ByteSpan b) { return cbor::Bytes{b.data(), b.size()}; }

Bytes Copy(cbor::Bytes b) { return Bytes(b.data, b.data + b.size); }

absl::StatusOr<Bytes> Unwrap(const k::StepResult& r) {
  if (r.error != k::StepError::kOk) return StepErrorToStatus(r.error, r.detail);
  return Copy(r.output);
}

absl::Status Malformed(const char* detail) {
  return StepErrorToStatus(k::StepError::kMalformedFrame, detail);
}

}  // namespace

int DOf(payload::SizeLabel size) {
  uint64_t elements = payload::SizeClassOf(size).byte_size / 4;
  return static_cast<int>(k::ExactSqrt(static_cast<size_t>(elements)));
}

absl::Status StepErrorToStatus(k::StepError error, const char* detail) {
  absl::StatusCode code = absl::StatusCode::kInvalidArgument;
  switch (error) {
    case k::StepError::kOk:
      return absl::OkStatus();
    case k::StepError::kChecksumMismatch:
    case k::StepError::kDigestMismatch:
      code = absl::StatusCode::kDataLoss;
      break;
    case k::StepError::kIncompleteFanIn:
      code = absl::StatusCode::kFailedPrecondition;
      break;
    case k::StepError::kUnknownStep:
      code = absl::StatusCode::kNotFound;
      break;
    case k::StepError::kOutOfMemory:
      code = absl::StatusCode::kResourceExhausted;
      break;
    default:
      break;
  }
  return MakeError(code, k::StepErrorName(error), detail);
}

uint8_t* HeapArena::Allocate(size_t n) {
  auto* p = static_cast<uint8_t*>(::operator new(n == 0 ? 1 : n, std::align_val_t{16}));
  blocks_.emplace_back(p);
  return p;
}

void HeapArena::Free::operator()(uint8_t* p) const {
  ::operator delete(p, std::align_val_t{16});
}

std::vector<float> FloatsFromLe(ByteSpan bytes) {
  std::vector<float> out(bytes.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) out[i] = k::LoadF32Le(bytes.data() + 4 * i);
  return out;
}

Bytes FloatsToLe(std::span<const float> values) {
  Bytes out(values.size() * 4);
  for (size_t i = 0; i < values.size(); ++i) k::StoreF32Le(values[i], out.data() + 4 * i);
  return out;
}

Bytes EncodeDataFrame(const DataFrame& frame) {
  cbor::Writer counter;
  k::EncodeDataFrameHeader(counter, frame.element_kind, frame.payload.size(),
                           frame.checksum.has_value(), frame.checksum.value_or(0));
  Bytes out(counter.size());
  cbor::Writer w(out.data(), out.size());
  uint8_t* data =
      k::EncodeDataFrameHeader(w, frame.element_kind, frame.payload.size(),
                               frame.checksum.has_value(), frame.checksum.value_or(0));
  if (!frame.payload.empty()) std::memcpy(data, frame.payload.data(), frame.payload.size());
  return out;
}

absl::StatusOr<DataFrame> DecodeDataFrame(ByteSpan bytes) {
  k::DataFrameView view;
  k::StepError e = k::DecodeDataFrame(View(bytes), &view);
  if (e != k::StepError::kOk) return StepErrorToStatus(e, "not a valid DataFrame");
  DataFrame frame;
  frame.schema_version = static_cast<uint32_t>(view.version);
  frame.element_kind = view.kind;
  frame.payload = Copy(view.data);
  if (view.has_crc) frame.checksum = view.crc;
  return frame;
}

Bytes EncodeMatrixBlock(const MatrixBlock& block) {
  cbor::Writer counter;
  k::EncodeMatrixBlockHeader(counter, block.dim_d, block.rows_from, block.rows_to);
  Bytes out(counter.size());
  cbor::Writer w(out.data(), out.size());
  uint8_t* values = k::EncodeMatrixBlockHeader(w, block.dim_d, block.rows_from, block.rows_to);
  size_t expected = static_cast<size_t>(block.rows_to - block.rows_from) * block.dim_d;
  for (size_t i = 0; i < expected && i < block.values.size(); ++i) {
    k::StoreF32Le(block.values[i], values + 4 * i);
  }
  return out;
}

absl::StatusOr<MatrixBlock> DecodeMatrixBlock(ByteSpan bytes) {
  cbor::Reader r(bytes.data(), bytes.size());
  k::MatrixBlockView view;
  k::StepError e = k::DecodeMatrixBlock(r, &view);
  if (e != k::StepError::kOk) return StepErrorToStatus(e, "not a valid MatrixBlock");
  if (!r.AtEnd()) return Malformed("trailing bytes after MatrixBlock");
  MatrixBlock block;
  block.dim_d = static_cast<uint32_t>(view.d);
  block.rows_from = static_cast<uint32_t>(view.from);
  block.rows_to = static_cast<uint32_t>(view.to);
  block.values = FloatsFromLe({view.values.data, view.values.size});
  return block;
}

absl::StatusOr<DataFrame> Ingest(ByteSpan frame_bytes) {
  HeapArena arena;
  auto out = Unwrap(k::Ingest(View(frame_bytes), arena));
  if (!out.ok()) return out.status();
  return DecodeDataFrame(*out);
}

absl::StatusOr<DataFrame> Preprocess(const DataFrame& frame) {
  HeapArena arena;
  Bytes in = EncodeDataFrame(frame);
  auto out = Unwrap(k::Preprocess(View(in), arena));
  if (!out.ok()) return out.status();
  return DecodeDataFrame(*out);
}

absl::StatusOr<MatrixBlock> MapBlock(const MatrixBlock& block_input,
                                     std::span<const float> full_matrix) {
  const size_t d = block_input.dim_d;
  if (d == 0 || full_matrix.size() != d * d) {
    return StepErrorToStatus(k::StepError::kDimensionMismatch,
                             "full matrix is not d x d");
  }
  if (block_input.rows_from >= block_input.rows_to || block_input.rows_to > d) {
    return StepErrorToStatus(k::StepError::kDimensionMismatch, "invalid strip rows");
  }
  const size_t rows = block_input.rows_to - block_input.rows_from;
  if (block_input.values.size() != rows * d) {
    return StepErrorToStatus(k::StepError::kDimensionMismatch,
                             "strip values do not match its rows");
  }
  MatrixBlock out;
  out.dim_d = block_input.dim_d;
  out.rows_from = block_input.rows_from;
  out.rows_to = block_input.rows_to;
  out.values.resize(rows * d);
  k::MatMulStrip(block_input.values.data(), full_matrix.data(), rows, d, out.values.data());
  return out;
}

absl::StatusOr<Reduced> Reduce(std::span<const MatrixBlock> blocks) {
  std::vector<Bytes> encoded;
  encoded.reserve(blocks.size());
  for (const MatrixBlock& b : blocks) encoded.push_back(EncodeMatrixBlock(b));
  Bytes in = MakeReduceInput(encoded);
  HeapArena arena;
  auto out = Unwrap(k::Reduce(View(in), arena));
  if (!out.ok()) return out.status();

  cbor::Reader r(out->data(), out->size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("reduce output is not a map");
  Reduced reduced;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("bad reduce output key");
    if (cbor::Equals(key, wire::kBlockDim)) {
      uint64_t d;
      if (!r.ReadUint(&d)) return Malformed("bad d");
      reduced.dim_d = static_cast<uint32_t>(d);
    } else if (cbor::Equals(key, wire::kDigest)) {
      cbor::Bytes digest;
      if (!r.ReadBytes(&digest) || digest.size != 32) return Malformed("bad digest");
      std::memcpy(reduced.digest.data(), digest.data, 32);
    } else if (cbor::Equals(key, wire::kBlockValues)) {
      cbor::Bytes values;
      if (!r.ReadBytes(&values)) return Malformed("bad values");
      reduced.values = FloatsFromLe({values.data, values.size});
    } else if (!r.Skip()) {
      return Malformed("bad reduce output");
    }
  }
  return reduced;
}

absl::StatusOr<Finalized> Finalize(std::span<const float> result,
                                   std::optional<Digest256> expected) {
  Bytes values = FloatsToLe(result);
  k::FinalizeInput input;
  input.values = cbor::Bytes{values.data(), values.size()};
  if (expected) input.expected = expected->data();
  HeapArena arena;
  auto out = Unwrap(k::FinalizeValues(input, arena));
  if (!out.ok()) return out.status();

  cbor::Reader r(out->data(), out->size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("finalize output is not a map");
  Finalized fin;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("bad finalize output key");
    if (cbor::Equals(key, wire::kFinalFrame)) {
      cbor::Bytes frame;
      if (!r.ReadBytes(&frame)) return Malformed("bad frame");
      fin.encoded_frame = Copy(frame);
    } else if (cbor::Equals(key, wire::kDigest)) {
      cbor::Bytes digest;
      if (!r.ReadBytes(&digest) || digest.size != 32) return Malformed("bad digest");
      std::memcpy(fin.digest.data(), digest.data, 32);
    } else if (cbor::Equals(key, wire::kVerified)) {
      bool v;
      if (!r.ReadBool(&v)) return Malformed("bad verified flag");
      fin.verified = v;
    } else if (!r.Skip()) {
      return Malformed("bad finalize output");
    }
  }
  auto frame = DecodeDataFrame(fin.encoded_frame);
  if (!frame.ok()) return frame.status();
  fin.frame = *std::move(frame);
  return fin;
}

absl::StatusOr<Bytes> RunStep(StepRef step, ByteSpan payload) {
  HeapArena arena;
  return Unwrap(k::RunPayloadStep(step, View(payload), arena));
}

Bytes HandleInvoke(ByteSpan invoke_frame) {
  HeapArena arena;
  cbor::Bytes in = View(invoke_frame);
  k::InvokeView view;
  const char* detail;
  k::StepResult r;
  if (k::DecodeInvoke(in, &view, &detail) != k::StepError::kOk) {
    // Any module yields the same error frame for an undecodable invoke.
    r = k::HandleInvoke<StepKind::kS1>(in, arena);
  } else {
    switch (view.step.kind) {
      case StepKind::kS1:
        r = k::HandleInvoke<StepKind::kS1>(in, arena);
        break;
      case StepKind::kS2:
        r = k::HandleInvoke<StepKind::kS2>(in, arena);
        break;
      case StepKind::kS3:
        r = k::HandleInvoke<StepKind::kS3>(in, arena);
        break;
      case StepKind::kS4:
        r = k::HandleInvoke<StepKind::kS4>(in, arena);
        break;
      case StepKind::kS5:
        r = k::HandleInvoke<StepKind::kS5>(in, arena);
        break;
    }
  }
  return Copy(r.output);
}

}  // namespace wasmflow::steps
