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

// The five workflow kernels, operating on CBOR bytes.
//
// This header is compiled into each wasm guest and into the native oracle
// library. Floating point follows IEEE-754 single precision with a fixed
// evaluation order; build with -ffp-contract=off and without fast-math.
//
// `Arena` is any type with `uint8_t* Allocate(size_t n)` returning 16-byte
// aligned storage that stays valid for the rest of the invocation, or null
// when exhausted.

#ifndef WASMFLOW_KERNELS_STEPS_H_
#define WASMFLOW_KERNELS_STEPS_H_

#include <stddef.h>
#include <stdint.h>

#include "wasmflow/kernels/blake3.h"
#include "wasmflow/kernels/cbor.h"
#include "wasmflow/kernels/crc32.h"
#include "wasmflow/kernels/wire.h"

namespace wasmflow::kernels {

enum class StepError : uint8_t {
  kOk = 0,
  kMalformedFrame,
  kChecksumMismatch,
  kLengthNotDivisible,
  kDimensionMismatch,
  kIncompleteFanIn,
  kDigestMismatch,
  kUnknownStep,
  kOutOfMemory,
};

inline const char* StepErrorName(StepError e) {
  switch (e) {
    case StepError::kOk:
      return "Ok";
    case StepError::kMalformedFrame:
      return "MalformedFrame";
    case StepError::kChecksumMismatch:
      return "ChecksumMismatch";
    case StepError::kLengthNotDivisible:
      return "LengthNotDivisible";
    case StepError::kDimensionMismatch:
      return "DimensionMismatch";
    case StepError::kIncompleteFanIn:
      return "IncompleteFanIn";
    case StepError::kDigestMismatch:
      return "DigestMismatch";
    case StepError::kUnknownStep:
      return "UnknownStep";
    case StepError::kOutOfMemory:
      return "OutOfMemory";
  }
  return "Unknown";
}

enum class ElementKind : uint8_t { kU8, kF32 };

struct StepResult {
  StepError error = StepError::kOk;
  const char* detail = "";
  cbor::Bytes output;
};

inline constexpr int kPreprocessWindow = 16;
inline constexpr size_t kMatMulTile = 32;
inline constexpr size_t kMaxFanIn = 64;

// ---------------------------------------------------------------------------
// Numeric kernels.

inline void StoreF32Le(float v, uint8_t* p) {
  uint32_t b;
  __builtin_memcpy(&b, &v, sizeof(b));
  p[0] = static_cast<uint8_t>(b);
  p[1] = static_cast<uint8_t>(b >> 8);
  p[2] = static_cast<uint8_t>(b >> 16);
  p[3] = static_cast<uint8_t>(b >> 24);
}

inline float LoadF32Le(const uint8_t* p) {
  uint32_t b = static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
               (static_cast<uint32_t>(p[2]) << 16) |
               (static_cast<uint32_t>(p[3]) << 24);
  float v;
  __builtin_memcpy(&v, &b, sizeof(v));
  return v;
}

inline uint32_t GroupSum(const uint8_t* in, size_t j) {
  const uint8_t* g = in + 4 * j;
  return static_cast<uint32_t>(g[0]) + g[1] + g[2] + g[3];
}

// u8 -> f32 preprocessing. Every 4 input bytes form one group; group j maps
// to clamp((mean_j - window_mean_j) / 255, -1, 1), where the window is the
// trailing kPreprocessWindow groups (fewer at the start). Integer sums keep
// the result independent of summation order.
inline void PreprocessGroups(const uint8_t* in, size_t n_groups, uint8_t* out) {
  uint32_t window_sum = 0;
  for (size_t j = 0; j < n_groups; ++j) {
    uint32_t g = GroupSum(in, j);
    window_sum += g;
    if (j >= static_cast<size_t>(kPreprocessWindow)) {
      window_sum -= GroupSum(in, j - kPreprocessWindow);
    }
    uint32_t count = j + 1 < static_cast<size_t>(kPreprocessWindow)
                         ? static_cast<uint32_t>(j + 1)
                         : static_cast<uint32_t>(kPreprocessWindow);
    float group_mean = static_cast<float>(g) / 4.0f;
    float window_mean =
        static_cast<float>(window_sum) / static_cast<float>(4 * count);
    float v = (group_mean - window_mean) / 255.0f;
    if (v < -1.0f) v = -1.0f;
    if (v > 1.0f) v = 1.0f;
    StoreF32Le(v, out + 4 * j);
  }
}

// out = strip x full, with strip `rows` x d and full d x d, row-major.
// Tiled kMatMulTile^3; for every output element the products are accumulated
// in ascending k, which is the same order as the naive triple loop.
inline void MatMulStrip(const float* __restrict strip,
                        const float* __restrict full, size_t rows, size_t d,
                        float* __restrict out) {
  for (size_t i = 0; i < rows * d; ++i) out[i] = 0.0f;
  for (size_t i0 = 0; i0 < rows; i0 += kMatMulTile) {
    size_t i1 = i0 + kMatMulTile < rows ? i0 + kMatMulTile : rows;
    for (size_t k0 = 0; k0 < d; k0 += kMatMulTile) {
      size_t k1 = k0 + kMatMulTile < d ? k0 + kMatMulTile : d;
      for (size_t j0 = 0; j0 < d; j0 += kMatMulTile) {
        size_t j1 = j0 + kMatMulTile < d ? j0 + kMatMulTile : d;
        for (size_t i = i0; i < i1; ++i) {
          float* __restrict c = out + i * d;
          const float* __restrict a = strip + i * d;
          for (size_t k = k0; k < k1; ++k) {
            const float aik = a[k];
            const float* __restrict b = full + k * d;
            for (size_t j = j0; j < j1; ++j) c[j] += aik * b[j];
          }
        }
      }
    }
  }
}

// Integer square root for matrix sizing; 0 when `n` is not a perfect square.
// Squares are formed in 64 bits so the search cannot overflow where size_t is
// 32 bits wide (wasm32).
inline size_t ExactSqrt(size_t n) {
  uint64_t lo = 0;
  uint64_t hi = n < 0xFFFFFFFFu ? n : 0xFFFFFFFFu;
  while (lo < hi) {
    uint64_t mid = lo + (hi - lo + 1) / 2;
    if (mid * mid <= n) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo * lo == n ? static_cast<size_t>(lo) : 0;
}

// Row range of fan-out branch `k` over a d x d matrix.
inline void StripRows(size_t d, int k, size_t* from, size_t* to) {
  size_t rows = d / wire::kFanOut;
  *from = rows * static_cast<size_t>(k);
  *to = *from + rows;
}

// ---------------------------------------------------------------------------
// Frame codecs.

struct DataFrameView {
  uint64_t version = wire::kFrameSchemaVersion;
  ElementKind kind = ElementKind::kU8;
  cbor::Bytes data;
  bool has_crc = false;
  uint32_t crc = 0;
};

inline StepError DecodeDataFrame(cbor::Bytes in, DataFrameView* out) {
  cbor::Reader r(in);
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return StepError::kMalformedFrame;
  bool has_data = false, has_kind = false, has_version = false;
  *out = DataFrameView{};
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return StepError::kMalformedFrame;
    if (cbor::Equals(key, wire::kFrameData)) {
      if (!r.ReadBytes(&out->data)) return StepError::kMalformedFrame;
      has_data = true;
    } else if (cbor::Equals(key, wire::kFrameKind)) {
      cbor::Bytes kind;
      if (!r.ReadText(&kind)) return StepError::kMalformedFrame;
      if (cbor::Equals(kind, "u8")) {
        out->kind = ElementKind::kU8;
      } else if (cbor::Equals(kind, "f32")) {
        out->kind = ElementKind::kF32;
      } else {
        return StepError::kMalformedFrame;
      }
      has_kind = true;
    } else if (cbor::Equals(key, wire::kFrameCrc32)) {
      uint64_t crc;
      if (!r.ReadUint(&crc) || crc > 0xFFFFFFFFull) return StepError::kMalformedFrame;
      out->has_crc = true;
      out->crc = static_cast<uint32_t>(crc);
    } else if (cbor::Equals(key, wire::kFrameVersion)) {
      if (!r.ReadUint(&out->version)) return StepError::kMalformedFrame;
      has_version = true;
    } else if (!r.Skip()) {
      return StepError::kMalformedFrame;
    }
  }
  if (!r.AtEnd() || !has_data || !has_kind || !has_version) {
    return StepError::kMalformedFrame;
  }
  if (out->version != wire::kFrameSchemaVersion) return StepError::kMalformedFrame;
  if (out->kind == ElementKind::kF32 && out->data.size % 4 != 0) {
    return StepError::kMalformedFrame;
  }
  return StepError::kOk;
}

// Encodes a DataFrame whose data region is left for the caller to fill;
// returns that region (null while counting).
inline uint8_t* EncodeDataFrameHeader(cbor::Writer& w, ElementKind kind,
                                      size_t data_size, bool has_crc,
                                      uint32_t crc) {
  w.MapHeader(has_crc ? 4 : 3);
  w.Text(wire::kFrameData);
  w.Head(cbor::Major::kBytes, data_size);
  uint8_t* data = w.Reserve(data_size);
  w.Text(wire::kFrameKind);
  w.Text(kind == ElementKind::kU8 ? "u8" : "f32");
  if (has_crc) {
    w.Text(wire::kFrameCrc32);
    w.Uint(crc);
  }
  w.Text(wire::kFrameVersion);
  w.Uint(wire::kFrameSchemaVersion);
  return data;
}

struct MatrixBlockView {
  uint64_t d = 0;
  uint64_t from = 0;
  uint64_t to = 0;
  cbor::Bytes values;
};

inline StepError DecodeMatrixBlock(cbor::Reader& r, MatrixBlockView* out) {
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return StepError::kMalformedFrame;
  bool has_d = false, has_from = false, has_to = false, has_values = false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return StepError::kMalformedFrame;
    bool ok;
    if (cbor::Equals(key, wire::kBlockDim)) {
      ok = r.ReadUint(&out->d);
      has_d = true;
    } else if (cbor::Equals(key, wire::kBlockFrom)) {
      ok = r.ReadUint(&out->from);
      has_from = true;
    } else if (cbor::Equals(key, wire::kBlockTo)) {
      ok = r.ReadUint(&out->to);
      has_to = true;
    } else if (cbor::Equals(key, wire::kBlockValues)) {
      ok = r.ReadBytes(&out->values);
      has_values = true;
    } else {
      ok = r.Skip();
    }
    if (!ok) return StepError::kMalformedFrame;
  }
  if (!has_d || !has_from || !has_to || !has_values) return StepError::kMalformedFrame;
  if (out->d == 0 || out->d > 0xFFFF || out->from >= out->to || out->to > out->d) {
    return StepError::kDimensionMismatch;
  }
  if (out->values.size != (out->to - out->from) * out->d * 4) {
    return StepError::kDimensionMismatch;
  }
  return StepError::kOk;
}

inline uint8_t* EncodeMatrixBlockHeader(cbor::Writer& w, uint64_t d,
                                        uint64_t from, uint64_t to) {
  w.MapHeader(4);
  w.Text(wire::kBlockDim);
  w.Uint(d);
  w.Text(wire::kBlockTo);
  w.Uint(to);
  w.Text(wire::kBlockFrom);
  w.Uint(from);
  w.Text(wire::kBlockValues);
  size_t n = static_cast<size_t>((to - from) * d * 4);
  w.Head(cbor::Major::kBytes, n);
  return w.Reserve(n);
}

// ---------------------------------------------------------------------------
// Steps. Each consumes the step's input payload and yields its output
// payload.

namespace steps_internal {

inline StepResult Fail(StepError e, const char* detail) {
  StepResult r;
  r.error = e;
  r.detail = detail;
  return r;
}

inline StepResult Done(uint8_t* data, size_t size) {
  StepResult r;
  r.output.data = data;
  r.output.size = size;
  return r;
}

template <class Arena>
float* AllocateFloats(Arena& arena, size_t count) {
  return reinterpret_cast<float*>(arena.Allocate(count * sizeof(float)));
}

}  // namespace steps_internal

// S1: decode, validate, CRC32 over the payload.
template <class Arena>
StepResult Ingest(cbor::Bytes in, Arena& arena) {
  using namespace steps_internal;
  DataFrameView f;
  StepError e = DecodeDataFrame(in, &f);
  if (e != StepError::kOk) return Fail(e, "input is not a valid DataFrame");
  if (f.kind != ElementKind::kU8) {
    return Fail(StepError::kMalformedFrame, "ingest expects element kind u8");
  }
  uint32_t crc = Crc32(f.data.data, f.data.size);
  if (f.has_crc && f.crc != crc) {
    return Fail(StepError::kChecksumMismatch, "payload CRC32 differs from envelope");
  }
  cbor::Writer counter;
  EncodeDataFrameHeader(counter, ElementKind::kU8, f.data.size, true, crc);
  uint8_t* buf = arena.Allocate(counter.size());
  if (buf == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  cbor::Writer w(buf, counter.size());
  uint8_t* data = EncodeDataFrameHeader(w, ElementKind::kU8, f.data.size, true, crc);
  if (f.data.size > 0) __builtin_memcpy(data, f.data.data, f.data.size);
  return Done(buf, w.size());
}

// S2: u8 -> f32 with the same byte length.
template <class Arena>
StepResult Preprocess(cbor::Bytes in, Arena& arena) {
  using namespace steps_internal;
  DataFrameView f;
  StepError e = DecodeDataFrame(in, &f);
  if (e != StepError::kOk) return Fail(e, "input is not a valid DataFrame");
  if (f.kind != ElementKind::kU8) {
    return Fail(StepError::kMalformedFrame, "preprocess expects element kind u8");
  }
  if (f.data.size % 4 != 0) {
    return Fail(StepError::kLengthNotDivisible, "payload length is not a multiple of 4");
  }
  cbor::Writer counter;
  EncodeDataFrameHeader(counter, ElementKind::kF32, f.data.size, false, 0);
  uint8_t* buf = arena.Allocate(counter.size());
  if (buf == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  cbor::Writer w(buf, counter.size());
  uint8_t* data = EncodeDataFrameHeader(w, ElementKind::kF32, f.data.size, false, 0);
  PreprocessGroups(f.data.data, f.data.size / 4, data);
  return Done(buf, w.size());
}

// S3[branch]: the branch's row strip of A times A, where A is the d x d
// matrix carried by the f32 input frame.
template <class Arena>
StepResult MapBlock(cbor::Bytes in, int branch, Arena& arena) {
  using namespace steps_internal;
  DataFrameView f;
  StepError e = DecodeDataFrame(in, &f);
  if (e != StepError::kOk) return Fail(e, "input is not a valid DataFrame");
  if (f.kind != ElementKind::kF32) {
    return Fail(StepError::kMalformedFrame, "map expects element kind f32");
  }
  size_t n = f.data.size / 4;
  size_t d = ExactSqrt(n);
  if (d == 0 || d % wire::kFanOut != 0) {
    return Fail(StepError::kDimensionMismatch,
                "element count is not a square with side divisible by fan-out");
  }
  if (branch < 0 || branch >= wire::kFanOut) {
    return Fail(StepError::kUnknownStep, "branch index out of range");
  }
  float* a = AllocateFloats(arena, n);
  if (a == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  for (size_t i = 0; i < n; ++i) a[i] = LoadF32Le(f.data.data + 4 * i);
  size_t from, to;
  StripRows(d, branch, &from, &to);
  size_t rows = to - from;
  float* c = AllocateFloats(arena, rows * d);
  if (c == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  MatMulStrip(a + from * d, a, rows, d, c);

  cbor::Writer counter;
  EncodeMatrixBlockHeader(counter, d, from, to);
  uint8_t* buf = arena.Allocate(counter.size());
  if (buf == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  cbor::Writer w(buf, counter.size());
  uint8_t* values = EncodeMatrixBlockHeader(w, d, from, to);
  for (size_t i = 0; i < rows * d; ++i) StoreF32Le(c[i], values + 4 * i);
  return Done(buf, w.size());
}

// S4: assembles the strips (in any arrival order) into the full d x d result
// and digests its little-endian serialization.
template <class Arena>
StepResult Reduce(cbor::Bytes in, Arena& arena) {
  using namespace steps_internal;
  cbor::Reader r(in);
  uint64_t count;
  if (!r.ReadArrayHeader(&count)) {
    return Fail(StepError::kMalformedFrame, "reduce expects an array of blocks");
  }
  if (count == 0 || count > kMaxFanIn) {
    return Fail(StepError::kIncompleteFanIn, "block count out of range");
  }
  MatrixBlockView blocks[kMaxFanIn];
  for (uint64_t i = 0; i < count; ++i) {
    StepError e = DecodeMatrixBlock(r, &blocks[i]);
    if (e != StepError::kOk) return Fail(e, "invalid matrix block");
  }
  if (!r.AtEnd()) return Fail(StepError::kMalformedFrame, "trailing bytes after blocks");
  uint64_t d = blocks[0].d;
  for (uint64_t i = 1; i < count; ++i) {
    if (blocks[i].d != d) return Fail(StepError::kDimensionMismatch, "blocks disagree on d");
  }
  // Keyed by row offset, not arrival order.
  for (uint64_t i = 1; i < count; ++i) {
    MatrixBlockView key = blocks[i];
    uint64_t j = i;
    while (j > 0 && blocks[j - 1].from > key.from) {
      blocks[j] = blocks[j - 1];
      --j;
    }
    blocks[j] = key;
  }
  uint64_t next_row = 0;
  for (uint64_t i = 0; i < count; ++i) {
    if (blocks[i].from != next_row) {
      return Fail(StepError::kIncompleteFanIn, "strips leave a gap or overlap");
    }
    next_row = blocks[i].to;
  }
  if (next_row != d) return Fail(StepError::kIncompleteFanIn, "strips do not reach row d");

  size_t total = static_cast<size_t>(d * d * 4);
  auto encode = [&](cbor::Writer& w, uint8_t** digest_slot, uint8_t** values_slot) {
    w.MapHeader(3);
    w.Text(wire::kBlockDim);
    w.Uint(d);
    w.Text(wire::kDigest);
    w.Head(cbor::Major::kBytes, kBlake3OutLen);
    *digest_slot = w.Reserve(kBlake3OutLen);
    w.Text(wire::kBlockValues);
    w.Head(cbor::Major::kBytes, total);
    *values_slot = w.Reserve(total);
  };
  cbor::Writer counter;
  uint8_t* digest;
  uint8_t* values;
  encode(counter, &digest, &values);
  uint8_t* buf = arena.Allocate(counter.size());
  if (buf == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  cbor::Writer w(buf, counter.size());
  encode(w, &digest, &values);
  size_t offset = 0;
  for (uint64_t i = 0; i < count; ++i) {
    __builtin_memcpy(values + offset, blocks[i].values.data, blocks[i].values.size);
    offset += blocks[i].values.size;
  }
  Blake3(values, total, digest);
  return Done(buf, w.size());
}

// Final frame encoding shared by S5 and the typed native API.
struct FinalizeInput {
  cbor::Bytes values;
  const uint8_t* expected = nullptr;  // 32 bytes when set
};

template <class Arena>
StepResult FinalizeValues(FinalizeInput input, Arena& arena) {
  using namespace steps_internal;
  if (input.values.size == 0 || input.values.size % 4 != 0) {
    return Fail(StepError::kMalformedFrame, "result must be a nonempty f32 sequence");
  }
  cbor::Writer frame_counter;
  EncodeDataFrameHeader(frame_counter, ElementKind::kF32, input.values.size, false, 0);
  size_t frame_size = frame_counter.size();
  bool has_expected = input.expected != nullptr;

  auto encode = [&](cbor::Writer& w, uint8_t** frame_slot, uint8_t** digest_slot) {
    w.MapHeader(has_expected ? 3 : 2);
    w.Text(wire::kFinalFrame);
    w.Head(cbor::Major::kBytes, frame_size);
    *frame_slot = w.Reserve(frame_size);
    w.Text(wire::kDigest);
    w.Head(cbor::Major::kBytes, kBlake3OutLen);
    *digest_slot = w.Reserve(kBlake3OutLen);
    if (has_expected) {
      w.Text(wire::kVerified);
      w.Bool(true);
    }
  };
  cbor::Writer counter;
  uint8_t* frame;
  uint8_t* digest;
  encode(counter, &frame, &digest);
  uint8_t* buf = arena.Allocate(counter.size());
  if (buf == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  cbor::Writer w(buf, counter.size());
  encode(w, &frame, &digest);

  cbor::Writer fw(frame, frame_size);
  uint8_t* data = EncodeDataFrameHeader(fw, ElementKind::kF32, input.values.size, false, 0);
  __builtin_memcpy(data, input.values.data, input.values.size);
  Blake3(frame, frame_size, digest);
  if (has_expected) {
    for (size_t i = 0; i < kBlake3OutLen; ++i) {
      if (digest[i] != input.expected[i]) {
        return Fail(StepError::kDigestMismatch, "final digest differs from expected");
      }
    }
  }
  return Done(buf, w.size());
}

// S5: checks the reduce digest, re-encodes the result as a DataFrame and
// digests the encoding; verifies against `expected` when the input has one.
template <class Arena>
StepResult Finalize(cbor::Bytes in, Arena& arena) {
  using namespace steps_internal;
  cbor::Reader r(in);
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Fail(StepError::kMalformedFrame, "finalize expects a map");
  FinalizeInput input;
  cbor::Bytes partial_digest;
  bool has_values = false, has_digest = false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Fail(StepError::kMalformedFrame, "bad key");
    bool ok;
    if (cbor::Equals(key, wire::kBlockValues)) {
      ok = r.ReadBytes(&input.values);
      has_values = true;
    } else if (cbor::Equals(key, wire::kDigest)) {
      ok = r.ReadBytes(&partial_digest) && partial_digest.size == kBlake3OutLen;
      has_digest = true;
    } else if (cbor::Equals(key, wire::kExpected)) {
      cbor::Bytes expected;
      ok = r.ReadBytes(&expected) && expected.size == kBlake3OutLen;
      input.expected = expected.data;
    } else {
      ok = r.Skip();
    }
    if (!ok) return Fail(StepError::kMalformedFrame, "invalid finalize field");
  }
  if (!r.AtEnd() || !has_values) {
    return Fail(StepError::kMalformedFrame, "finalize input lacks values");
  }
  if (has_digest) {
    uint8_t check[kBlake3OutLen];
    Blake3(input.values.data, input.values.size, check);
    for (size_t i = 0; i < kBlake3OutLen; ++i) {
      if (check[i] != partial_digest.data[i]) {
        return Fail(StepError::kDigestMismatch, "reduce digest does not match values");
      }
    }
  }
  return FinalizeValues(input, arena);
}

// ---------------------------------------------------------------------------
// Guest entry: InvokeFrame bytes in, ResultFrame bytes out.

struct InvokeView {
  wire::StepRef step;
  cbor::Bytes run_id;
  cbor::Bytes payload;
};

inline StepError DecodeInvoke(cbor::Bytes in, InvokeView* out, const char** detail) {
  cbor::Reader r(in);
  uint64_t n;
  *detail = "invoke frame is not a CBOR map";
  if (!r.ReadMapHeader(&n)) return StepError::kMalformedFrame;
  bool has_op = false, has_step = false, has_run = false, has_payload = false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return StepError::kMalformedFrame;
    if (cbor::Equals(key, wire::kOp)) {
      cbor::Bytes op;
      if (!r.ReadText(&op) || !cbor::Equals(op, wire::kOpInvoke)) {
        *detail = "op must be \"invoke\"";
        return StepError::kMalformedFrame;
      }
      has_op = true;
    } else if (cbor::Equals(key, wire::kStepId)) {
      cbor::Bytes text;
      if (!r.ReadText(&text)) return StepError::kMalformedFrame;
      if (!wire::ParseStepRef(text, &out->step)) {
        *detail = "unknown step_id";
        return StepError::kUnknownStep;
      }
      has_step = true;
    } else if (cbor::Equals(key, wire::kRunId)) {
      if (!r.ReadText(&out->run_id)) return StepError::kMalformedFrame;
      has_run = true;
    } else if (cbor::Equals(key, wire::kPayload)) {
      if (!r.ReadBytes(&out->payload)) return StepError::kMalformedFrame;
      has_payload = true;
    } else if (!r.Skip()) {
      return StepError::kMalformedFrame;
    }
  }
  if (!r.AtEnd() || !has_op || !has_step || !has_run || !has_payload ||
      out->run_id.size == 0) {
    *detail = "invoke frame is missing required fields";
    return StepError::kMalformedFrame;
  }
  return StepError::kOk;
}

template <class Arena>
StepResult RunPayloadStep(wire::StepRef step, cbor::Bytes payload, Arena& arena) {
  switch (step.kind) {
    case wire::StepKind::kS1:
      return Ingest(payload, arena);
    case wire::StepKind::kS2:
      return Preprocess(payload, arena);
    case wire::StepKind::kS3:
      return MapBlock(payload, step.branch, arena);
    case wire::StepKind::kS4:
      return Reduce(payload, arena);
    case wire::StepKind::kS5:
      return Finalize(payload, arena);
  }
  return steps_internal::Fail(StepError::kUnknownStep, "unknown step");
}

// Compile-time dispatch so each guest module links only its own kernel.
template <wire::StepKind kModule, class Arena>
StepResult RunModuleStep(wire::StepRef step, cbor::Bytes payload, Arena& arena) {
  if constexpr (kModule == wire::StepKind::kS1) {
    return Ingest(payload, arena);
  } else if constexpr (kModule == wire::StepKind::kS2) {
    return Preprocess(payload, arena);
  } else if constexpr (kModule == wire::StepKind::kS3) {
    return MapBlock(payload, step.branch, arena);
  } else if constexpr (kModule == wire::StepKind::kS4) {
    return Reduce(payload, arena);
  } else {
    return Finalize(payload, arena);
  }
}

// Runs one invocation for the module implementing `kModule`. The output is
// always a ResultFrame unless the arena cannot hold even the error frame.
template <wire::StepKind kModule, class Arena>
StepResult HandleInvoke(cbor::Bytes invoke, Arena& arena) {
  using namespace steps_internal;
  InvokeView view;
  const char* detail = "";
  StepError e = DecodeInvoke(invoke, &view, &detail);
  StepResult result;
  if (e != StepError::kOk) {
    result = Fail(e, detail);
  } else if (view.step.kind != kModule) {
    result = Fail(StepError::kUnknownStep, "step_id is not served by this module");
  } else {
    result = RunModuleStep<kModule>(view.step, view.payload, arena);
  }

  auto encode = [&](cbor::Writer& w, uint8_t** payload_slot) {
    w.MapHeader(3);
    w.Text(wire::kOp);
    w.Text(wire::kOpResult);
    if (result.error == StepError::kOk) {
      w.Text(wire::kStatus);
      w.Text(wire::kStatusOk);
      w.Text(wire::kPayload);
      w.Head(cbor::Major::kBytes, result.output.size);
      *payload_slot = w.Reserve(result.output.size);
    } else {
      w.Text(wire::kError);
      w.MapHeader(2);
      w.Text(wire::kErrorCode);
      w.Text(StepErrorName(result.error));
      w.Text(wire::kErrorMessage);
      w.Text(result.detail);
      w.Text(wire::kStatus);
      w.Text(wire::kStatusError);
    }
  };
  cbor::Writer counter;
  uint8_t* slot = nullptr;
  encode(counter, &slot);
  uint8_t* buf = arena.Allocate(counter.size());
  if (buf == nullptr) return Fail(StepError::kOutOfMemory, "arena exhausted");
  cbor::Writer w(buf, counter.size());
  encode(w, &slot);
  if (result.error == StepError::kOk && result.output.size > 0) {
    __builtin_memcpy(slot, result.output.data, result.output.size);
  }
  StepResult framed;
  framed.error = result.error;
  framed.detail = result.detail;
  framed.output.data = buf;
  framed.output.size = w.size();
  return framed;
}

}  // namespace wasmflow::kernels

#endif  // WASMFLOW_KERNELS_STEPS_H_
