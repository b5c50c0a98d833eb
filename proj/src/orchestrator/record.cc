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

#include "wasmflow/orchestrator/record.h"

#include <sstream>

#include "json.hpp"
#include "wasmflow/common/errors.h"

namespace wasmflow::orchestrator {
namespace {

using nlohmann::json;

absl::Status Corrupt(std::string_view detail) {
  return MakeError(absl::StatusCode::kDataLoss, error_kind::kCorruptLog, detail);
}

json PhasesToJson(const PhaseBreakdown& p) {
  return {{"load", p.load_us},
          {"compile", p.compile_us},
          {"instantiate", p.instantiate_us},
          {"init", p.init_us},
          {"execute", p.execute_us}};
}

PhaseBreakdown PhasesFromJson(const json& j) {
  PhaseBreakdown p;
  p.load_us = j.at("load").get<int64_t>();
  p.compile_us = j.at("compile").get<int64_t>();
  p.instantiate_us = j.at("instantiate").get<int64_t>();
  p.init_us = j.at("init").get<int64_t>();
  p.execute_us = j.at("execute").get<int64_t>();
  return p;
}

json SpanToJson(const StepSpan& s) {
  json j = {{"step", protocol::StepIdName(s.step)},
            {"start_us", s.start_us},
            {"end_us", s.end_us},
            {"resource_best_effort", s.resource_best_effort}};
  if (s.phases) j["phases"] = PhasesToJson(*s.phases);
  if (s.instance) j["instance"] = protocol::InstanceStateName(*s.instance);
  if (s.executor_total_us) j["executor_total_us"] = *s.executor_total_us;
  json samples = json::array();
  for (const ResourceSample& r : s.resource_samples) {
    samples.push_back(json::array({r.t_us, r.cpu_pct, r.rss_bytes}));
  }
  j["resources"] = std::move(samples);
  return j;
}

absl::StatusOr<InstanceState> ParseInstance(const std::string& name) {
  if (name == "cold") return InstanceState::kCold;
  if (name == "warm") return InstanceState::kWarm;
  return Corrupt("unknown instance state '" + name + "'");
}

absl::StatusOr<StepSpan> SpanFromJson(const json& j) {
  StepSpan s;
  auto step = protocol::ParseStepId(j.at("step").get<std::string>());
  if (!step.ok()) return Corrupt("bad step id");
  s.step = *step;
  s.start_us = j.at("start_us").get<int64_t>();
  s.end_us = j.at("end_us").get<int64_t>();
  s.resource_best_effort = j.value("resource_best_effort", false);
  if (j.contains("phases")) s.phases = PhasesFromJson(j.at("phases"));
  if (j.contains("instance")) {
    auto instance = ParseInstance(j.at("instance").get<std::string>());
    if (!instance.ok()) return instance.status();
    s.instance = *instance;
  }
  if (j.contains("executor_total_us")) s.executor_total_us = j.at("executor_total_us").get<int64_t>();
  for (const json& r : j.value("resources", json::array())) {
    s.resource_samples.push_back(
        ResourceSample{r.at(0).get<int64_t>(), r.at(1).get<double>(), r.at(2).get<uint64_t>()});
  }
  return s;
}

}  // namespace

std::string CellSpec::Id() const {
  return env + "/" + std::string(payload::SizeLabelName(payload)) + "/" +
         std::string(protocol::CompileModeName(mode)) + "/" +
         std::string(protocol::StatePolicyName(state));
}

absl::StatusOr<CellSpec> ParseCellId(std::string_view id) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in{std::string(id)};
  while (std::getline(in, part, '/')) parts.push_back(part);
  if (parts.size() != 4 || parts[0].empty()) {
    return absl::InvalidArgumentError("cell id must be env/payload/mode/state: " + std::string(id));
  }
  CellSpec cell;
  cell.env = parts[0];
  auto size = payload::ParseSizeLabel(parts[1]);
  auto mode = protocol::ParseCompileMode(parts[2]);
  auto state = protocol::ParseStatePolicy(parts[3]);
  if (!size.ok()) return size.status();
  if (!mode.ok()) return mode.status();
  if (!state.ok()) return state.status();
  cell.payload = *size;
  cell.mode = *mode;
  cell.state = *state;
  return cell;
}

std::string_view VerificationName(Verification v) {
  switch (v) {
    case Verification::kOk:
      return "ok";
    case Verification::kFail:
      return "fail";
    case Verification::kSkipped:
      return "skipped";
  }
  return "skipped";
}

const StepSpan* RunRecord::SpanOf(protocol::StepRef step) const {
  for (const StepSpan& s : spans) {
    if (s.step == step) return &s;
  }
  return nullptr;
}

std::string RecordToJsonLine(const RunRecord& r) {
  json spans = json::array();
  for (const StepSpan& s : r.spans) spans.push_back(SpanToJson(s));
  json j = {{"run_id", r.run_id},
            {"cell", r.cell.Id()},
            {"repetition", r.repetition},
            {"seed", r.seed},
            {"spans", std::move(spans)},
            {"makespan_us", r.makespan_us},
            {"state_observed", protocol::InstanceStateName(r.state_observed)},
            {"verification", VerificationName(r.verification)}};
  if (r.final_digest) j["final_digest"] = *r.final_digest;
  if (r.discard_reason) j["discard_reason"] = *r.discard_reason;
  return j.dump();
}

absl::StatusOr<RunRecord> RecordFromJsonLine(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return Corrupt("not a JSON object");
  try {
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    auto cell = ParseCellId(j.at("cell").get<std::string>());
    if (!cell.ok()) return Corrupt("bad cell id");
    r.cell = *cell;
    r.repetition = j.at("repetition").get<int>();
    r.seed = j.at("seed").get<uint64_t>();
    for (const json& s : j.at("spans")) {
      auto span = SpanFromJson(s);
      if (!span.ok()) return span.status();
      r.spans.push_back(*std::move(span));
    }
    r.makespan_us = j.at("makespan_us").get<int64_t>();
    auto observed = ParseInstance(j.at("state_observed").get<std::string>());
    if (!observed.ok()) return observed.status();
    r.state_observed = *observed;
    std::string verification = j.at("verification").get<std::string>();
    if (verification == "ok") {
      r.verification = Verification::kOk;
    } else if (verification == "fail") {
      r.verification = Verification::kFail;
    } else if (verification == "skipped") {
      r.verification = Verification::kSkipped;
    } else {
      return Corrupt("unknown verification '" + verification + "'");
    }
    if (j.contains("final_digest")) r.final_digest = j.at("final_digest").get<std::string>();
    if (j.contains("discard_reason")) r.discard_reason = j.at("discard_reason").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    // The JSON library reports type and key errors by exception.
    return Corrupt(e.what());
  }
}

absl::StatusOr<std::vector<RunRecord>> ReadRecordLog(const std::string& path,
                                                     const ReadLogOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot open record log " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<RunRecord> records;
  size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    bool terminated = end != std::string::npos;
    if (!terminated) end = content.size();
    std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto record = RecordFromJsonLine(line);
    if (!record.ok()) {
      if (!terminated && options.ignore_partial_tail) break;
      std::string hint = terminated ? "" : " (truncated final line; rerun with --ignore-partial)";
      return Corrupt(path + ":" + std::to_string(line_no) + ": " +
                     std::string(ErrorDetailOf(record.status())) + hint);
    }
    records.push_back(*std::move(record));
  }
  return records;
}

absl::StatusOr<std::unique_ptr<JsonlRecordSink>> JsonlRecordSink::Open(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) return absl::UnavailableError("cannot open record log " + path);
  return std::unique_ptr<JsonlRecordSink>(new JsonlRecordSink(std::move(out)));
}

absl::Status JsonlRecordSink::Append(const RunRecord& record) {
  std::lock_guard<std::mutex> lock(mu_);
  out_ << RecordToJsonLine(record) << '\n';
  out_.flush();
  if (!out_) return absl::DataLossError("failed to append to record log");
  return absl::OkStatus();
}

absl::Status MemoryRecordSink::Append(const RunRecord& record) {
  records_.push_back(record);
  return absl::OkStatus();
}

}  // namespace wasmflow::orchestrator
