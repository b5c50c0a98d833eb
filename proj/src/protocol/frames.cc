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

#include "wasmflow/protocol/frames.h"

#include <string>

#include "canonical_map.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/kernels/cbor.h"

namespace wasmflow::protocol {

namespace cbor = ::wasmflow::kernels::cbor;
namespace wire = ::wasmflow::kernels::wire;
using internal::CanonicalMap;
using internal::EncodeWith;

namespace {

constexpr char kPhaseLoad[] = "load";
constexpr char kPhaseCompile[] = "compile";
constexpr char kPhaseInstantiate[] = "instantiate";
constexpr char kPhaseInit[] = "init";
constexpr char kPhaseExecute[] = "execute";
constexpr char kSampleT[] = "t";
constexpr char kSampleCpu[] = "cpu_pct";
constexpr char kSampleRss[] = "rss_bytes";
constexpr char kResourceBestEffort[] = "resource_best_effort";

absl::Status Malformed(std::string_view detail) {
  return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kMalformedFrame, detail);
}

std::string_view AsView(cbor::Bytes b) {
  return {reinterpret_cast<const char*>(b.data), b.size};
}

bool ReadString(cbor::Reader& r, std::string* out) {
  cbor::Bytes b;
  if (!r.ReadText(&b)) return false;
  out->assign(AsView(b));
  return true;
}

bool ReadStepId(cbor::Reader& r, StepRef* out) {
  cbor::Bytes b;
  return r.ReadText(&b) && wire::ParseStepRef(b, out);
}

Bytes EncodePhases(const PhaseBreakdown& p) {
  CanonicalMap m;
  m.Int(kPhaseLoad, p.load_us);
  m.Int(kPhaseCompile, p.compile_us);
  m.Int(kPhaseInstantiate, p.instantiate_us);
  m.Int(kPhaseInit, p.init_us);
  m.Int(kPhaseExecute, p.execute_us);
  return m.Finish();
}

bool DecodePhases(cbor::Reader& r, PhaseBreakdown* p) {
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return false;
    int64_t* slot = nullptr;
    if (cbor::Equals(key, kPhaseLoad)) slot = &p->load_us;
    if (cbor::Equals(key, kPhaseCompile)) slot = &p->compile_us;
    if (cbor::Equals(key, kPhaseInstantiate)) slot = &p->instantiate_us;
    if (cbor::Equals(key, kPhaseInit)) slot = &p->init_us;
    if (cbor::Equals(key, kPhaseExecute)) slot = &p->execute_us;
    if (!(slot ? r.ReadInt(slot) : r.Skip())) return false;
  }
  return true;
}

Bytes EncodeSamples(const std::vector<ResourceSample>& samples) {
  Bytes out = EncodeWith([&](cbor::Writer& w) { w.ArrayHeader(samples.size()); });
  for (const ResourceSample& s : samples) {
    CanonicalMap m;
    m.Int(kSampleT, s.t_us);
    m.Encoded(kSampleCpu, EncodeWith([&](cbor::Writer& w) { w.Float64(s.cpu_pct); }));
    m.Uint(kSampleRss, s.rss_bytes);
    Bytes item = m.Finish();
    out.insert(out.end(), item.begin(), item.end());
  }
  return out;
}

bool DecodeSamples(cbor::Reader& r, std::vector<ResourceSample>* out) {
  uint64_t count;
  if (!r.ReadArrayHeader(&count)) return false;
  out->clear();
  for (uint64_t i = 0; i < count; ++i) {
    uint64_t n;
    if (!r.ReadMapHeader(&n)) return false;
    ResourceSample s;
    for (uint64_t j = 0; j < n; ++j) {
      cbor::Bytes key;
      if (!r.ReadText(&key)) return false;
      bool ok;
      if (cbor::Equals(key, kSampleT)) {
        ok = r.ReadInt(&s.t_us);
      } else if (cbor::Equals(key, kSampleCpu)) {
        ok = r.ReadNumber(&s.cpu_pct);
      } else if (cbor::Equals(key, kSampleRss)) {
        ok = r.ReadUint(&s.rss_bytes);
      } else {
        ok = r.Skip();
      }
      if (!ok) return false;
    }
    out->push_back(s);
  }
  return true;
}

Bytes EncodeError(const FrameError& e) {
  CanonicalMap m;
  m.Text(wire::kErrorCode, e.code);
  m.Text(wire::kErrorMessage, e.message);
  return m.Finish();
}

bool DecodeError(cbor::Reader& r, FrameError* e) {
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return false;
    bool ok;
    if (cbor::Equals(key, wire::kErrorCode)) {
      ok = ReadString(r, &e->code);
    } else if (cbor::Equals(key, wire::kErrorMessage)) {
      ok = ReadString(r, &e->message);
    } else {
      ok = r.Skip();
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::string StepIdName(StepRef step) {
  char buf[8];
  size_t n = wire::FormatStepRef(step, buf);
  return std::string(buf, n);
}

std::string StepKindName(StepKind kind) { return "S" + std::to_string(static_cast<int>(kind)); }

std::optional<StepKind> ParseStepKindName(std::string_view name) {
  if (name.size() != 2 || name[0] != 'S' || name[1] < '1' || name[1] > '5') return std::nullopt;
  return static_cast<StepKind>(name[1] - '0');
}

absl::StatusOr<StepRef> ParseStepId(std::string_view name) {
  StepRef ref;
  if (!wire::ParseStepRef({reinterpret_cast<const uint8_t*>(name.data()), name.size()}, &ref)) {
    return MakeError(absl::StatusCode::kNotFound, error_kind::kUnknownStep,
                     "unknown step_id '" + std::string(name) + "'");
  }
  return ref;
}

const std::vector<StepRef>& AllStepIds() {
  static const std::vector<StepRef> kIds = {
      {StepKind::kS1, -1}, {StepKind::kS2, -1}, {StepKind::kS3, 0}, {StepKind::kS3, 1},
      {StepKind::kS3, 2},  {StepKind::kS3, 3},  {StepKind::kS4, -1}, {StepKind::kS5, -1}};
  return kIds;
}

std::string_view InstanceStateName(InstanceState state) {
  return state == InstanceState::kCold ? "cold" : "warm";
}

Bytes EncodeFrame(const InvokeFrame& frame) {
  CanonicalMap m;
  m.Text(wire::kOp, wire::kOpInvoke);
  m.Text(wire::kStepId, StepIdName(frame.step_id));
  m.Text(wire::kRunId, frame.run_id);
  m.ByteString(wire::kPayload, frame.payload);
  return m.Finish();
}

Bytes EncodeFrame(const ResultFrame& frame) {
  CanonicalMap m;
  m.Text(wire::kOp, wire::kOpResult);
  bool ok = frame.status == ResultStatus::kOk;
  m.Text(wire::kStatus, ok ? wire::kStatusOk : wire::kStatusError);
  if (ok) m.ByteString(wire::kPayload, frame.payload);
  if (frame.error) m.Encoded(wire::kError, EncodeError(*frame.error));
  if (frame.run_id) m.Text(wire::kRunId, *frame.run_id);
  if (frame.step_id) m.Text(wire::kStepId, StepIdName(*frame.step_id));
  if (frame.total_us) m.Int(wire::kTotalUs, *frame.total_us);
  if (frame.instance) m.Text(wire::kInstance, InstanceStateName(*frame.instance));
  if (frame.phase_breakdown) m.Encoded(wire::kPhaseBreakdown, EncodePhases(*frame.phase_breakdown));
  if (frame.resource_samples) {
    m.Encoded(wire::kResourceSamples, EncodeSamples(*frame.resource_samples));
  }
  if (frame.resource_best_effort) m.Bool(kResourceBestEffort, true);
  return m.Finish();
}

Bytes EncodeFrame(const ControlFrame& frame) {
  CanonicalMap m;
  m.Text(wire::kOp, frame.op);
  m.Text(wire::kRunId, frame.run_id);
  return m.Finish();
}

absl::StatusOr<InvokeFrame> DecodeInvokeFrame(ByteSpan bytes) {
  cbor::Reader r(bytes.data(), bytes.size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("invoke frame is not a CBOR map");
  InvokeFrame frame;
  bool has_op = false, has_step = false, has_run = false, has_payload = false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("invoke frame key is not text");
    bool ok = true;
    if (cbor::Equals(key, wire::kOp)) {
      cbor::Bytes op;
      ok = r.ReadText(&op) && cbor::Equals(op, wire::kOpInvoke);
      if (!ok) return Malformed("op must be \"invoke\"");
      has_op = true;
    } else if (cbor::Equals(key, wire::kStepId)) {
      std::string name;
      if (!ReadString(r, &name)) return Malformed("step_id is not text");
      auto step = ParseStepId(name);
      if (!step.ok()) return step.status();
      frame.step_id = *step;
      has_step = true;
    } else if (cbor::Equals(key, wire::kRunId)) {
      ok = ReadString(r, &frame.run_id);
      has_run = true;
    } else if (cbor::Equals(key, wire::kPayload)) {
      cbor::Bytes payload;
      ok = r.ReadBytes(&payload);
      if (ok) frame.payload.assign(payload.data, payload.data + payload.size);
      has_payload = true;
    } else {
      ok = r.Skip();
    }
    if (!ok) return Malformed("invalid invoke frame field");
  }
  if (!r.AtEnd()) return Malformed("trailing bytes after invoke frame");
  if (!has_op || !has_step || !has_run || !has_payload) {
    return Malformed("invoke frame lacks op, step_id, run_id or payload");
  }
  if (frame.run_id.empty()) return Malformed("run_id is empty");
  return frame;
}

absl::StatusOr<ResultFrame> DecodeResultFrame(ByteSpan bytes) {
  cbor::Reader r(bytes.data(), bytes.size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("result frame is not a CBOR map");
  ResultFrame frame;
  bool has_op = false, has_status = false, has_payload = false;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("result frame key is not text");
    bool ok = true;
    if (cbor::Equals(key, wire::kOp)) {
      cbor::Bytes op;
      ok = r.ReadText(&op) && cbor::Equals(op, wire::kOpResult);
      if (!ok) return Malformed("op must be \"result\"");
      has_op = true;
    } else if (cbor::Equals(key, wire::kStatus)) {
      cbor::Bytes status;
      ok = r.ReadText(&status);
      if (ok && cbor::Equals(status, wire::kStatusOk)) {
        frame.status = ResultStatus::kOk;
      } else if (ok && cbor::Equals(status, wire::kStatusError)) {
        frame.status = ResultStatus::kError;
      } else {
        return Malformed("status must be \"ok\" or \"error\"");
      }
      has_status = true;
    } else if (cbor::Equals(key, wire::kPayload)) {
      cbor::Bytes payload;
      ok = r.ReadBytes(&payload);
      if (ok) frame.payload.assign(payload.data, payload.data + payload.size);
      has_payload = true;
    } else if (cbor::Equals(key, wire::kError)) {
      FrameError e;
      ok = DecodeError(r, &e);
      frame.error = std::move(e);
    } else if (cbor::Equals(key, wire::kRunId)) {
      std::string run_id;
      ok = ReadString(r, &run_id);
      frame.run_id = std::move(run_id);
    } else if (cbor::Equals(key, wire::kStepId)) {
      StepRef step;
      ok = ReadStepId(r, &step);
      frame.step_id = step;
    } else if (cbor::Equals(key, wire::kTotalUs)) {
      int64_t total = 0;
      ok = r.ReadInt(&total);
      frame.total_us = total;
    } else if (cbor::Equals(key, wire::kInstance)) {
      cbor::Bytes state;
      ok = r.ReadText(&state);
      if (ok && cbor::Equals(state, "cold")) {
        frame.instance = InstanceState::kCold;
      } else if (ok && cbor::Equals(state, "warm")) {
        frame.instance = InstanceState::kWarm;
      } else {
        ok = false;
      }
    } else if (cbor::Equals(key, wire::kPhaseBreakdown)) {
      PhaseBreakdown p;
      ok = DecodePhases(r, &p);
      frame.phase_breakdown = p;
    } else if (cbor::Equals(key, wire::kResourceSamples)) {
      std::vector<ResourceSample> samples;
      ok = DecodeSamples(r, &samples);
      frame.resource_samples = std::move(samples);
    } else if (cbor::Equals(key, kResourceBestEffort)) {
      ok = r.ReadBool(&frame.resource_best_effort);
    } else {
      ok = r.Skip();
    }
    if (!ok) return Malformed("invalid result frame field");
  }
  if (!r.AtEnd()) return Malformed("trailing bytes after result frame");
  if (!has_op || !has_status) return Malformed("result frame lacks op or status");
  if (frame.status == ResultStatus::kError && !frame.error) {
    return Malformed("status=error without error");
  }
  if (frame.status == ResultStatus::kOk && !has_payload) {
    return Malformed("status=ok without payload");
  }
  return frame;
}

absl::StatusOr<ControlFrame> DecodeControlFrame(ByteSpan bytes) {
  cbor::Reader r(bytes.data(), bytes.size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("control frame is not a CBOR map");
  ControlFrame frame;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("control frame key is not text");
    bool ok;
    if (cbor::Equals(key, wire::kOp)) {
      ok = ReadString(r, &frame.op);
    } else if (cbor::Equals(key, wire::kRunId)) {
      ok = ReadString(r, &frame.run_id);
    } else {
      ok = r.Skip();
    }
    if (!ok) return Malformed("invalid control frame field");
  }
  if (!r.AtEnd() || frame.op.empty()) return Malformed("control frame lacks op");
  return frame;
}

absl::StatusOr<std::string> PeekOp(ByteSpan bytes) {
  cbor::Reader r(bytes.data(), bytes.size());
  uint64_t n;
  if (!r.ReadMapHeader(&n)) return Malformed("frame is not a CBOR map");
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    if (!r.ReadText(&key)) return Malformed("frame key is not text");
    if (cbor::Equals(key, wire::kOp)) {
      std::string op;
      if (!ReadString(r, &op)) return Malformed("op is not text");
      return op;
    }
    if (!r.Skip()) return Malformed("frame is truncated");
  }
  return Malformed("frame has no op");
}

ResultFrame ErrorResult(std::string_view code, std::string_view message) {
  ResultFrame frame;
  frame.status = ResultStatus::kError;
  frame.error = FrameError{std::string(code), std::string(message)};
  return frame;
}

absl::Status ResultStatusOf(const ResultFrame& frame) {
  if (frame.status == ResultStatus::kOk) return absl::OkStatus();
  const FrameError& e = *frame.error;
  return MakeError(absl::StatusCode::kAborted, e.code, e.message);
}

}  // namespace wasmflow::protocol
