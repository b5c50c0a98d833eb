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

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "support/fake_harness.h"
#include "support/temp_dir.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/orchestrator/backend.h"
#include "wasmflow/orchestrator/bridge_backend.h"
#include "wasmflow/orchestrator/campaign.h"
#include "wasmflow/orchestrator/dag.h"
#include "wasmflow/orchestrator/record.h"
#include "wasmflow/orchestrator/stub_backend.h"
#include "wasmflow/orchestrator/workflow.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::orchestrator {
namespace {

using namespace std::chrono_literals;
using payload::SizeLabel;

StepRef S(StepKind kind, int branch = -1) { return StepRef{kind, branch}; }

CellSpec Cell(std::string env, SizeLabel size, CompileMode mode, StatePolicy state) {
  return CellSpec{std::move(env), size, mode, state};
}

// ---------------------------------------------------------------------------
// DAG

TEST(DagTest, BenchmarkDagIsValidWithFourBranches) {
  const DagSpec& dag = BenchmarkDag();
  EXPECT_TRUE(ValidateDag(dag).ok());
  EXPECT_EQ(dag.steps.size(), 8u);
  EXPECT_EQ(dag.fan_out, 4);
  EXPECT_EQ(dag.fan_in, 4);
  EXPECT_EQ(PredecessorsOf(dag, S(StepKind::kS4)).size(), 4u);
  EXPECT_EQ(PredecessorsOf(dag, S(StepKind::kS3, 2)),
            std::vector<StepRef>{S(StepKind::kS2)});
  EXPECT_TRUE(PredecessorsOf(dag, S(StepKind::kS1)).empty());

  auto paths = EnumeratePaths(dag);
  ASSERT_EQ(paths.size(), 4u);
  for (int b = 0; b < 4; ++b) {
    EXPECT_EQ(paths[b], (std::vector<StepRef>{S(StepKind::kS1), S(StepKind::kS2),
                                              S(StepKind::kS3, b), S(StepKind::kS4),
                                              S(StepKind::kS5)}));
  }
}

TEST(DagTest, RejectsMalformedGraphs) {
  DagSpec dup{{S(StepKind::kS1), S(StepKind::kS1)}, {}, 1, 1};
  EXPECT_FALSE(ValidateDag(dup).ok());

  DagSpec undeclared{{S(StepKind::kS1)}, {{S(StepKind::kS1), S(StepKind::kS2)}}, 1, 1};
  EXPECT_FALSE(ValidateDag(undeclared).ok());

  DagSpec backwards{{S(StepKind::kS1), S(StepKind::kS2)},
                    {{S(StepKind::kS1), S(StepKind::kS2)}, {S(StepKind::kS2), S(StepKind::kS1)}},
                    1,
                    1};
  EXPECT_FALSE(ValidateDag(backwards).ok());
}

// ---------------------------------------------------------------------------
// Records

RunRecord SampleRecord() {
  RunRecord r;
  r.run_id = "edge/small/aot/warm-3-abc";
  r.cell = Cell("edge", SizeLabel::kSmall, CompileMode::kAot, StatePolicy::kWarmPool);
  r.repetition = 3;
  r.seed = 1;
  StepSpan s;
  s.step = S(StepKind::kS3, 1);
  s.start_us = 100;
  s.end_us = 250;
  s.phases = PhaseBreakdown{1, 2, 3, 4, 5};
  s.instance = InstanceState::kWarm;
  s.executor_total_us = 140;
  s.resource_samples = {{110, 12.5, 4096}, {130, 99.0, 8192}};
  s.resource_best_effort = true;
  StepSpan s5;
  s5.step = S(StepKind::kS5);
  s5.start_us = 260;
  s5.end_us = 300;
  r.spans = {s, s5};
  r.makespan_us = 200;
  r.state_observed = InstanceState::kWarm;
  r.verification = Verification::kOk;
  r.final_digest = std::string(64, 'a');
  return r;
}

TEST(RecordTest, CellIdRoundTrip) {
  CellSpec cell = Cell("browser", SizeLabel::kLarge, CompileMode::kJit, StatePolicy::kColdOneShot);
  EXPECT_EQ(cell.Id(), "browser/large/jit/cold");
  auto parsed = ParseCellId(cell.Id());
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, cell);
  EXPECT_FALSE(ParseCellId("browser/large/jit").ok());
  EXPECT_FALSE(ParseCellId("browser/huge/jit/cold").ok());
  EXPECT_FALSE(ParseCellId("/large/jit/cold").ok());
}

TEST(RecordTest, JsonLineRoundTrip) {
  RunRecord r = SampleRecord();
  auto back = RecordFromJsonLine(RecordToJsonLine(r));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, r);

  r.discard_reason = "StepFailed: S2: boom";
  r.final_digest.reset();
  r.verification = Verification::kSkipped;
  back = RecordFromJsonLine(RecordToJsonLine(r));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, r);
  EXPECT_TRUE(back->Discarded());
}

TEST(RecordTest, MalformedLinesAreCorruptLog) {
  for (std::string_view line : {"{", "[]", "{\"run_id\":1}", "{\"run_id\":\"x\"}"}) {
    auto r = RecordFromJsonLine(line);
    ASSERT_FALSE(r.ok()) << line;
    EXPECT_TRUE(HasErrorKind(r.status(), error_kind::kCorruptLog)) << r.status();
  }
}

TEST(RecordTest, LogReaderReportsLineAndPartialTail) {
  test::TempDir dir;
  const std::string path = (dir.path() / "runs.jsonl").string();
  {
    auto sink = JsonlRecordSink::Open(path);
    ASSERT_TRUE(sink.ok());
    ASSERT_TRUE((*sink)->Append(SampleRecord()).ok());
    ASSERT_TRUE((*sink)->Append(SampleRecord()).ok());
  }
  auto records = ReadRecordLog(path);
  ASSERT_TRUE(records.ok());
  EXPECT_EQ(records->size(), 2u);

  // A writer that died mid-line.
  std::string line = RecordToJsonLine(SampleRecord());
  { std::ofstream(path, std::ios::app) << line.substr(0, line.size() / 2); }
  records = ReadRecordLog(path);
  ASSERT_FALSE(records.ok());
  EXPECT_TRUE(HasErrorKind(records.status(), error_kind::kCorruptLog));
  EXPECT_NE(records.status().message().find(":3:"), std::string::npos) << records.status();
  EXPECT_NE(records.status().message().find("--ignore-partial"), std::string::npos);
  records = ReadRecordLog(path, {.ignore_partial_tail = true});
  ASSERT_TRUE(records.ok());
  EXPECT_EQ(records->size(), 2u);

  // Corruption before the tail is never ignored.
  { std::ofstream(path, std::ios::trunc) << "garbage\n" << line << "\n"; }
  records = ReadRecordLog(path, {.ignore_partial_tail = true});
  ASSERT_FALSE(records.ok());
  EXPECT_NE(records.status().message().find(":1:"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Workflow execution

class WorkflowTest : public ::testing::Test {
 protected:
  WorkflowRequest Request(SizeLabel size, uint64_t seed = 42) {
    raw_ = payload::Generate({seed, size});
    WorkflowRequest request;
    request.cell = Cell("stub", size, CompileMode::kJit, StatePolicy::kWarmPool);
    request.run_id = "run-1";
    request.seed = seed;
    request.raw = raw_;
    request.expected = steps::GoldenDigest(seed, size);
    return request;
  }

  Bytes raw_;
};

TEST_F(WorkflowTest, StubPipelineVerifiesAgainstGoldenDigest) {
  StubBackend backend("stub");
  RunRecord record = ExecuteWorkflow(backend, Request(SizeLabel::kSmall, 1));
  EXPECT_FALSE(record.Discarded()) << *record.discard_reason;
  EXPECT_EQ(record.verification, Verification::kOk);
  ASSERT_TRUE(record.final_digest);
  EXPECT_EQ(*record.final_digest, ToHex(*steps::GoldenDigest(1, SizeLabel::kSmall)));
  EXPECT_EQ(record.spans.size(), 8u);
  EXPECT_EQ(record.state_observed, InstanceState::kCold);  // first use of every step
  for (const StepSpan& s : record.spans) {
    ASSERT_TRUE(s.phases.has_value());
    EXPECT_LE(s.start_us, s.end_us);
  }

  RunRecord again = ExecuteWorkflow(backend, Request(SizeLabel::kSmall, 1));
  EXPECT_EQ(again.state_observed, InstanceState::kWarm);
}

TEST_F(WorkflowTest, FanOutRunsConcurrentlyAndFanInWaitsForAllBranches) {
  StubOptions options;
  options.delay = 5ms;
  options.step_delay[StepKind::kS3] = 40ms;
  StubBackend backend("stub", options);
  RunRecord record = ExecuteWorkflow(backend, Request(SizeLabel::kSmall));
  ASSERT_FALSE(record.Discarded());
  EXPECT_EQ(backend.max_in_flight(), 4);

  const StepSpan* s4 = record.SpanOf(S(StepKind::kS4));
  const StepSpan* s2 = record.SpanOf(S(StepKind::kS2));
  ASSERT_NE(s4, nullptr);
  int64_t path_max = 0;
  for (int b = 0; b < 4; ++b) {
    const StepSpan* s3 = record.SpanOf(S(StepKind::kS3, b));
    ASSERT_NE(s3, nullptr);
    EXPECT_GE(s3->start_us, s2->end_us);
    EXPECT_GE(s4->start_us, s3->end_us);
  }
  for (const auto& path : EnumeratePaths(BenchmarkDag())) {
    int64_t sum = 0;
    for (StepRef step : path) sum += record.SpanOf(step)->Duration();
    path_max = std::max(path_max, sum);
    EXPECT_GE(record.makespan_us, sum);
  }
  int64_t all_spans = 0;
  for (const StepSpan& s : record.spans) all_spans += s.Duration();
  EXPECT_LT(record.makespan_us, all_spans);  // branches overlapped
}

TEST_F(WorkflowTest, MaxInFlightOneSerializesBranches) {
  StubOptions options;
  options.step_delay[StepKind::kS3] = 10ms;
  StubBackend backend("stub", options);
  RunRecord record = ExecuteWorkflow(backend, Request(SizeLabel::kSmall), {.max_in_flight = 1});
  EXPECT_EQ(record.verification, Verification::kOk);
  EXPECT_EQ(backend.max_in_flight(), 1);
}

TEST_F(WorkflowTest, StepFailureDiscardsRecord) {
  StubOptions options;
  options.fail_step = StepKind::kS3;
  StubBackend backend("stub", options);
  RunRecord record = ExecuteWorkflow(backend, Request(SizeLabel::kSmall));
  ASSERT_TRUE(record.Discarded());
  EXPECT_EQ(record.discard_reason->rfind("StepFailed: S3[", 0), 0u) << *record.discard_reason;
  EXPECT_NE(record.discard_reason->find("StepTrap"), std::string::npos);
  EXPECT_EQ(record.verification, Verification::kSkipped);
  EXPECT_EQ(record.SpanOf(S(StepKind::kS4)), nullptr);  // never dispatched
  EXPECT_EQ(record.spans.size(), 6u);                   // S1, S2, four S3 branches
}

TEST_F(WorkflowTest, WrongExpectedDigestFailsVerification) {
  StubBackend backend("stub");
  WorkflowRequest request = Request(SizeLabel::kSmall);
  (*request.expected)[0] ^= 1;
  RunRecord record = ExecuteWorkflow(backend, request);
  EXPECT_FALSE(record.Discarded());
  EXPECT_EQ(record.verification, Verification::kFail);
}

TEST_F(WorkflowTest, NoExpectedDigestSkipsVerification) {
  StubBackend backend("stub");
  WorkflowRequest request = Request(SizeLabel::kSmall, 7);
  request.expected.reset();
  RunRecord record = ExecuteWorkflow(backend, request);
  EXPECT_EQ(record.verification, Verification::kSkipped);
  auto native = steps::RunNativePipeline(raw_);
  ASSERT_TRUE(native.ok());
  EXPECT_EQ(record.final_digest, ToHex(native->final_digest));
}

class FailingBackend : public StubBackend {
 public:
  FailingBackend() : StubBackend("failing") {}
  absl::StatusOr<ResultFrame> Invoke(const InvokeFrame& frame,
                                     const InvocationSettings& settings) override {
    if (frame.step_id.kind == StepKind::kS2) {
      return MakeError(absl::StatusCode::kUnavailable, error_kind::kBackendUnavailable, "gone");
    }
    return StubBackend::Invoke(frame, settings);
  }
};

TEST_F(WorkflowTest, TransportFailureDiscardsRecord) {
  FailingBackend backend;
  RunRecord record = ExecuteWorkflow(backend, Request(SizeLabel::kSmall));
  ASSERT_TRUE(record.Discarded());
  EXPECT_EQ(record.discard_reason->rfind("BackendUnavailable", 0), 0u) << *record.discard_reason;
}

// ---------------------------------------------------------------------------
// Plans

std::vector<CellSpec> Grid() {
  std::vector<CellSpec> cells;
  for (CompileMode mode : {CompileMode::kJit, CompileMode::kAot}) {
    for (StatePolicy state : {StatePolicy::kColdOneShot, StatePolicy::kWarmPool}) {
      cells.push_back(Cell("edge", SizeLabel::kSmall, mode, state));
    }
  }
  return cells;
}

TEST(PlanOrderTest, DeterministicPermutationOfAllRepetitions) {
  const auto cells = Grid();
  auto a = PlanOrder(cells, 20, 7);
  auto b = PlanOrder(cells, 20, 7);
  auto c = PlanOrder(cells, 20, 8);
  ASSERT_EQ(a.size(), 80u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);

  std::set<std::pair<std::string, int>> seen;
  std::set<std::string> ids;
  for (const PlannedRun& run : a) {
    seen.insert({run.cell.Id(), run.repetition});
    ids.insert(run.run_id);
    EXPECT_EQ(run.run_id.rfind(run.cell.Id() + "-" + std::to_string(run.repetition) + "-", 0), 0u);
  }
  EXPECT_EQ(seen.size(), 80u);
  EXPECT_EQ(ids.size(), 80u);

  // Interleaved: not grouped by cell.
  int changes = 0;
  for (size_t i = 1; i < a.size(); ++i) changes += !(a[i].cell == a[i - 1].cell);
  EXPECT_GT(changes, 20);
}

TEST(PlanOrderTest, FrozenOrderForSeedOne) {
  // Guards against accidental changes to the shuffle or the id stream.
  std::vector<CellSpec> cells = {Cell("e", SizeLabel::kSmall, CompileMode::kJit,
                                      StatePolicy::kWarmPool)};
  auto plan = PlanOrder(cells, 8, 1);
  std::vector<int> reps;
  for (const PlannedRun& run : plan) reps.push_back(run.repetition);
  EXPECT_EQ(reps, (std::vector<int>{4, 6, 3, 5, 1, 7, 2, 0}));
  EXPECT_EQ(plan[0].run_id, "e/small/jit/warm-4-285c7059-259d-4adb-a623-306e6d923447");
}

TEST(RunPlanTest, WarmupsAreNotLoggedAndColdCellsReset) {
  StubBackend backend("edge");
  MemoryRecordSink sink;
  PlanConfig config;
  config.cells = Grid();
  config.k = 3;
  config.warmups = 2;
  config.order_seed = 11;
  auto summary = RunPlan({{"edge", &backend}}, config, sink);
  ASSERT_TRUE(summary.ok()) << summary.status();
  EXPECT_EQ(summary->executed, 12);
  EXPECT_EQ(summary->discarded, 0);
  EXPECT_EQ(summary->verification_failures, 0);
  ASSERT_EQ(sink.records().size(), 12u);

  auto plan = PlanOrder(config.cells, config.k, config.order_seed);
  for (size_t i = 0; i < plan.size(); ++i) {
    const RunRecord& r = sink.records()[i];
    EXPECT_EQ(r.run_id, plan[i].run_id);
    EXPECT_EQ(r.cell, plan[i].cell);
    EXPECT_GE(r.repetition, 0);
    EXPECT_EQ(r.run_id.find("warmup"), std::string::npos);
    EXPECT_EQ(r.verification, Verification::kOk);
    EXPECT_EQ(r.state_observed, r.cell.state == StatePolicy::kColdOneShot ? InstanceState::kCold
                                                                          : InstanceState::kWarm)
        << r.run_id;
  }

  int warmup_invocations = 0;
  for (const StubInvocation& inv : backend.invocations()) {
    if (inv.run_id.rfind("warmup-", 0) == 0) ++warmup_invocations;
  }
  EXPECT_EQ(warmup_invocations, 4 * 2 * 8);
  // One reset per cold run, measured or warm-up.
  EXPECT_EQ(backend.reset_count(), 2 * (3 + 2));
}

TEST(RunPlanTest, UnavailableEnvironmentYieldsFlaggedRecords) {
  StubBackend good("edge");
  StubOptions unhealthy;
  unhealthy.healthy = false;
  StubBackend bad("browser", unhealthy);
  MemoryRecordSink sink;
  PlanConfig config;
  config.cells = {Cell("edge", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool),
                  Cell("browser", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool)};
  config.k = 2;
  config.warmups = 1;
  auto summary = RunPlan({{"edge", &good}, {"browser", &bad}}, config, sink);
  ASSERT_TRUE(summary.ok());
  EXPECT_EQ(summary->executed, 4);
  EXPECT_EQ(summary->discarded, 2);
  EXPECT_EQ(summary->unavailable_envs, std::vector<std::string>{"browser"});
  for (const RunRecord& r : sink.records()) {
    if (r.cell.env == "browser") {
      ASSERT_TRUE(r.Discarded());
      EXPECT_EQ(r.discard_reason->rfind("BackendUnavailable", 0), 0u);
      EXPECT_EQ(r.verification, Verification::kSkipped);
      EXPECT_TRUE(r.spans.empty());
    } else {
      EXPECT_FALSE(r.Discarded());
    }
  }
  EXPECT_TRUE(bad.invocations().empty());
}

TEST(RunPlanTest, UnknownEnvironmentIsAnError) {
  MemoryRecordSink sink;
  PlanConfig config;
  config.cells = {Cell("nowhere", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool)};
  EXPECT_FALSE(RunPlan({}, config, sink).ok());
}

TEST(ThroughputTest, ClosedLoopRateMatchesStubLatency) {
  StubOptions options;
  options.step_delay[StepKind::kS1] = 50ms;
  StubBackend backend("stub", options);
  ThroughputConfig config;
  config.cell = Cell("stub", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool);
  config.duration = 1000ms;
  auto result = ThroughputRun(backend, config);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->failed, 0);
  EXPECT_NEAR(result->per_second, 20.0, 2.0);

  config.concurrency = 2;
  result = ThroughputRun(backend, config);
  ASSERT_TRUE(result.ok());
  EXPECT_NEAR(result->per_second, 40.0, 4.0);
}

TEST(ThroughputTest, RequiresWarmCellAndPrimesIt) {
  StubOptions options;
  options.cold_startup = 30ms;
  StubBackend backend("stub", options);
  ThroughputConfig config;
  config.cell = Cell("stub", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kColdOneShot);
  config.duration = 200ms;
  EXPECT_FALSE(ThroughputRun(backend, config).ok());

  config.cell.state = StatePolicy::kWarmPool;
  auto result = ThroughputRun(backend, config);
  ASSERT_TRUE(result.ok());
  // One primed workflow ran before the measured ones.
  EXPECT_EQ(static_cast<int64_t>(backend.invocations().size()),
            8 * (result->completed + result->failed + 1));
}

// ---------------------------------------------------------------------------
// Bridge transport

std::unique_ptr<BridgeBackend> ListenLocal(std::chrono::milliseconds timeout = 10s) {
  auto bridge = BridgeBackend::Listen("browser", "127.0.0.1", 0, timeout, 2s);
  EXPECT_TRUE(bridge.ok()) << bridge.status();
  return *std::move(bridge);
}

TEST(BridgeTest, HealthFailsWithoutHarness) {
  auto bridge = BridgeBackend::Listen("browser", "127.0.0.1", 0, 1s, 50ms);
  ASSERT_TRUE(bridge.ok());
  absl::Status health = (*bridge)->Health();
  EXPECT_TRUE(HasErrorKind(health, error_kind::kBackendUnavailable)) << health;
  auto result = (*bridge)->Invoke(InvokeFrame{S(StepKind::kS1), "r", {}}, {});
  EXPECT_TRUE(HasErrorKind(result.status(), error_kind::kBackendUnavailable));
}

TEST(BridgeTest, WorkflowThroughFakeHarness) {
  auto bridge = ListenLocal();
  test::FakeHarness harness(bridge->port());
  ASSERT_TRUE(bridge->Health().ok());

  Bytes raw = payload::Generate({42, SizeLabel::kSmall});
  WorkflowRequest request;
  request.cell = Cell("browser", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool);
  request.run_id = "bridge-run";
  request.raw = raw;
  request.expected = steps::GoldenDigest(42, SizeLabel::kSmall);
  RunRecord record = ExecuteWorkflow(*bridge, request);
  ASSERT_FALSE(record.Discarded()) << *record.discard_reason;
  EXPECT_EQ(record.verification, Verification::kOk);
  EXPECT_EQ(record.state_observed, InstanceState::kCold);

  request.run_id = "bridge-run-2";
  record = ExecuteWorkflow(*bridge, request);
  EXPECT_EQ(record.verification, Verification::kOk);
  EXPECT_EQ(record.state_observed, InstanceState::kWarm);

  ASSERT_TRUE(bridge->ResetPool().ok());
  EXPECT_EQ(harness.resets(), 1);
  request.run_id = "bridge-run-3";
  record = ExecuteWorkflow(*bridge, request);
  EXPECT_EQ(record.state_observed, InstanceState::kCold);
}

TEST(BridgeTest, LargeFrameCrossesTheSocket) {
  auto bridge = ListenLocal();
  test::FakeHarness harness(bridge->port());
  ASSERT_TRUE(bridge->Health().ok());
  Bytes raw = payload::Generate({42, SizeLabel::kLarge});
  InvokeFrame frame{S(StepKind::kS1), "big", steps::MakeIngestInput(raw)};
  auto result = bridge->Invoke(frame, {});
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_TRUE(protocol::ResultStatusOf(*result).ok());
  auto native = steps::RunStep(frame.step_id, frame.payload);
  ASSERT_TRUE(native.ok());
  EXPECT_EQ(result->payload, *native);
}

TEST(BridgeTest, DroppedSocketFailsPendingCalls) {
  auto bridge = ListenLocal();
  test::FakeHarness harness(bridge->port(), {.drop_at_invoke = 1});
  ASSERT_TRUE(bridge->Health().ok());
  auto result = bridge->Invoke(InvokeFrame{S(StepKind::kS1), "r", steps::MakeIngestInput({})}, {});
  ASSERT_FALSE(result.ok());
  EXPECT_TRUE(HasErrorKind(result.status(), error_kind::kBackendUnavailable)) << result.status();
}

TEST(BridgeTest, SilentHarnessTimesOut) {
  auto bridge = ListenLocal(200ms);
  test::FakeHarness harness(bridge->port(), {.silent = true});
  ASSERT_TRUE(bridge->Health().ok());
  auto result = bridge->Invoke(InvokeFrame{S(StepKind::kS2), "r", {}}, {});
  ASSERT_FALSE(result.ok());
  EXPECT_TRUE(HasErrorKind(result.status(), error_kind::kTimeout)) << result.status();
}

TEST(BackendFactoryTest, ValidatesTransportAndEndpoint) {
  EXPECT_FALSE(MakeBackend("x", {"carrier-pigeon", "a", 1s}).ok());
  EXPECT_FALSE(MakeBackend("x", {"http", "127.0.0.1:80", 1s}).ok());
  EXPECT_FALSE(MakeBackend("x", {"bridge", "127.0.0.1", 1s}).ok());
  EXPECT_TRUE(MakeBackend("x", {"http", "http://127.0.0.1:1", 1s}).ok());
  auto bridge = MakeBackend("x", {"bridge", "127.0.0.1:0", 1s});
  ASSERT_TRUE(bridge.ok()) << bridge.status();
  EXPECT_EQ((*bridge)->Name(), "x");
}

}  // namespace
}  // namespace wasmflow::orchestrator
