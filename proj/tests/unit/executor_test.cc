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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include "gtest/gtest.h"
#include "support/temp_dir.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/executor/engine.h"
#include "wasmflow/executor/executor.h"
#include "wasmflow/executor/sampler.h"
#include "wasmflow/payload/payload.h"
#include "wasmflow/steps/steps.h"
#include "wasmflow/steps/workflow.h"
#include "wasmtime.hh"

namespace wasmflow::executor {
namespace {

using namespace std::chrono_literals;
using protocol::InstanceState;
using protocol::ResultStatus;
using protocol::StepRef;

Bytes Wat(std::string_view text) {
  auto wasm = wasmtime::wat2wasm(text);
  EXPECT_TRUE(static_cast<bool>(wasm));
  return wasm.ok();
}

// Guest that traps in `run`.
constexpr char kTrapGuest[] = R"((module
  (memory (export "memory") 1)
  (func (export "init") (result i32) i32.const 0)
  (func (export "frame_alloc") (param i32) (result i32) i32.const 1024)
  (func (export "run") (param i32 i32) (result i64) unreachable)))";

// Guest that never returns from `run`.
constexpr char kSpinGuest[] = R"((module
  (memory (export "memory") 1)
  (func (export "init") (result i32) i32.const 0)
  (func (export "frame_alloc") (param i32) (result i32) i32.const 1024)
  (func (export "run") (param i32 i32) (result i64) (loop $l (br $l)) i64.const 0)))";

// Guest that echoes its input region back.
constexpr char kEchoGuest[] = R"((module
  (memory (export "memory") 1)
  (func (export "init") (result i32) i32.const 0)
  (func (export "frame_alloc") (param i32) (result i32) i32.const 1024)
  (func (export "run") (param i32 i32) (result i64)
    (i64.or (i64.shl (i64.extend_i32_u (local.get 0)) (i64.const 32))
            (i64.extend_i32_u (local.get 1))))))";

std::unique_ptr<HostEngine> Engine(std::chrono::milliseconds timeout = 120000ms) {
  auto engine = MakeWasmtimeEngine({timeout});
  EXPECT_TRUE(engine.ok());
  return *std::move(engine);
}

// Copies the built step modules into a fresh directory.
std::filesystem::path StageArtifacts(const test::TempDir& dir) {
  for (StepKind kind : kAllStepKinds) {
    std::filesystem::copy_file(WasmPath(WASMFLOW_TEST_ARTIFACT_DIR, kind),
                               WasmPath(dir.path(), kind));
  }
  return dir.path();
}

protocol::InvokeFrame IngestFrame(uint64_t seed = 42) {
  Bytes raw = payload::Generate({seed, payload::SizeLabel::kSmall});
  return protocol::InvokeFrame{{StepKind::kS1, -1}, "run-1", steps::MakeIngestInput(raw)};
}

TEST(WasmtimeEngineTest, EchoGuestRoundTripsFrameBytes) {
  auto engine = Engine();
  auto module = engine->Compile(Wat(kEchoGuest));
  ASSERT_TRUE(module.ok()) << module.status();
  auto instance = engine->Instantiate(*module);
  ASSERT_TRUE(instance.ok()) << instance.status();
  ASSERT_TRUE((*instance)->Init().ok());
  Bytes frame = {1, 2, 3, 4, 5};
  auto out = (*instance)->Call(frame);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(*out, frame);
}

TEST(WasmtimeEngineTest, RejectsInvalidModules) {
  auto engine = Engine();
  Bytes garbage = {0x00, 0x61, 0x73, 0x6d, 0xff};
  EXPECT_TRUE(HasErrorKind(engine->Compile(garbage).status(), error_kind::kInvalidModule));
  EXPECT_TRUE(HasErrorKind(engine->LoadPrecompiled(garbage).status(), error_kind::kInvalidModule));
  auto no_exports = engine->Compile(Wat("(module (memory (export \"memory\") 1))"));
  ASSERT_TRUE(no_exports.ok());
  EXPECT_TRUE(
      HasErrorKind(engine->Instantiate(*no_exports).status(), error_kind::kInvalidModule));
}

TEST(WasmtimeEngineTest, GuestTrapIsReported) {
  auto engine = Engine();
  auto instance = engine->Instantiate(*engine->Compile(Wat(kTrapGuest)));
  ASSERT_TRUE(instance.ok());
  auto out = (*instance)->Call(Bytes{1});
  EXPECT_TRUE(HasErrorKind(out.status(), error_kind::kStepTrap)) << out.status();
}

TEST(WasmtimeEngineTest, RunawayGuestTimesOut) {
  auto engine = Engine(100ms);
  auto instance = engine->Instantiate(*engine->Compile(Wat(kSpinGuest)));
  ASSERT_TRUE(instance.ok());
  auto start = std::chrono::steady_clock::now();
  auto out = (*instance)->Call(Bytes{1});
  EXPECT_TRUE(HasErrorKind(out.status(), error_kind::kTimeout)) << out.status();
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(WasmtimeEngineTest, PrecompiledObjectLoadsAndRuns) {
  auto engine = Engine();
  auto object = engine->Precompile(Wat(kEchoGuest));
  ASSERT_TRUE(object.ok());
  auto module = engine->LoadPrecompiled(*object);
  ASSERT_TRUE(module.ok()) << module.status();
  auto instance = engine->Instantiate(*module);
  ASSERT_TRUE(instance.ok());
  EXPECT_EQ(*(*instance)->Call(Bytes{7, 8}), (Bytes{7, 8}));
}

TEST(ArtifactsTest, ReproducesPublishedSizeIncreases) {
  struct Row {
    StepKind step;
    uint64_t wasm, aot;
    int64_t pct;
  };
  const Row rows[] = {{StepKind::kS1, 152000, 342000, 125}, {StepKind::kS2, 135000, 317000, 135},
                      {StepKind::kS3, 141000, 322000, 128}, {StepKind::kS4, 151000, 354000, 134},
                      {StepKind::kS5, 153000, 360000, 135}};
  for (const Row& r : rows) {
    EXPECT_EQ(MakeSizeEntry(r.step, r.wasm, r.aot).pct_increase, r.pct);
  }
  EXPECT_EQ(PercentIncrease(1000, 1000), 0);
  EXPECT_EQ(PercentIncrease(1000, 500), -50);
  EXPECT_EQ(PercentIncrease(200, 301), 51);  // 50.5 rounds away from zero
}

TEST(ArtifactsTest, PrecompileIsIdempotentAndTracksInput) {
  test::TempDir dir;
  StageArtifacts(dir);
  auto engine = Engine();
  auto first = PrecompileAot(*engine, WasmPath(dir.path(), StepKind::kS2));
  ASSERT_TRUE(first.ok()) << first.status();
  EXPECT_FALSE(first->cache_hit);
  EXPECT_EQ(first->object, AotPath(dir.path(), StepKind::kS2));
  auto second = PrecompileAot(*engine, WasmPath(dir.path(), StepKind::kS2));
  ASSERT_TRUE(second.ok());
  EXPECT_TRUE(second->cache_hit);

  // A changed module invalidates the cached object.
  std::filesystem::copy_file(WasmPath(dir.path(), StepKind::kS1),
                             WasmPath(dir.path(), StepKind::kS2),
                             std::filesystem::copy_options::overwrite_existing);
  auto third = PrecompileAot(*engine, WasmPath(dir.path(), StepKind::kS2));
  ASSERT_TRUE(third.ok());
  EXPECT_FALSE(third->cache_hit);

  EXPECT_TRUE(HasErrorKind(PrecompileAot(*engine, dir.path() / "absent.wasm").status(),
                           error_kind::kMissingArtifact));
  WriteFileText((dir.path() / "bad.wasm").string(), "not wasm").IgnoreError();
  EXPECT_TRUE(HasErrorKind(PrecompileAot(*engine, dir.path() / "bad.wasm").status(),
                           error_kind::kInvalidModule));
}

TEST(ArtifactsTest, SizeReportNeedsEveryArtifact) {
  test::TempDir dir;
  StageArtifacts(dir);
  auto engine = Engine();
  for (StepKind kind : kAllStepKinds) {
    ASSERT_TRUE(PrecompileAot(*engine, WasmPath(dir.path(), kind)).ok());
  }
  auto report = ReportArtifactSizes(dir.path());
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->size(), 5u);
  for (const ArtifactSizeEntry& e : *report) {
    EXPECT_EQ(e.wasm_bytes, std::filesystem::file_size(WasmPath(dir.path(), e.step)));
    EXPECT_EQ(e.aot_bytes, std::filesystem::file_size(AotPath(dir.path(), e.step)));
    EXPECT_EQ(e.pct_increase, PercentIncrease(e.wasm_bytes, e.aot_bytes));
  }
  std::filesystem::remove(AotPath(dir.path(), StepKind::kS3));
  EXPECT_TRUE(
      HasErrorKind(ReportArtifactSizes(dir.path()).status(), error_kind::kMissingArtifact));
}

TEST(SamplerTest, ParsesProcStatWithAwkwardCommandName) {
  test::TempDir dir;
  std::filesystem::create_directories(dir.path() / "self");
  std::ofstream(dir.path() / "self" / "stat")
      << "123 (a) b (c)) S 1 2 3 4 5 6 7 8 9 10 200 100 0 0 20 0\n";
  std::ofstream(dir.path() / "self" / "statm") << "1000 250 10 1 0 100 0\n";
  auto stat = ReadProcStat(dir.path());
  ASSERT_TRUE(stat.ok()) << stat.status();
  EXPECT_EQ(stat->cpu_us, 300 * 1000000 / sysconf(_SC_CLK_TCK));
  EXPECT_EQ(stat->rss_bytes, 250u * sysconf(_SC_PAGESIZE));
}

TEST(SamplerTest, IdleWindowFollowsCadence) {
  ResourceSampler sampler("/proc", 20ms);
  sampler.Start();
  std::this_thread::sleep_for(200ms);
  SamplingResult r = sampler.Stop();
  EXPECT_FALSE(r.best_effort);
  EXPECT_GE(r.samples.size(), 9u);
  EXPECT_LE(r.samples.size(), 11u);
  for (size_t i = 1; i < r.samples.size(); ++i) {
    EXPECT_LE(r.samples[i - 1].t_us, r.samples[i].t_us);
  }
  for (const ResourceSample& s : r.samples) {
    EXPECT_GE(s.cpu_pct, 0.0);
    EXPECT_GT(s.rss_bytes, 0u);
  }
}

TEST(SamplerTest, BusyLoopShowsHighCpu) {
  ResourceSampler sampler("/proc", 20ms);
  sampler.Start();
  auto end = std::chrono::steady_clock::now() + 400ms;
  volatile uint64_t sink = 0;
  while (std::chrono::steady_clock::now() < end) sink = sink + 1;
  SamplingResult r = sampler.Stop();
  ResourceSummary summary = SummarizeResources(r.samples);
  EXPECT_GT(summary.mean_cpu_pct, 80.0);
  EXPECT_GE(summary.peak_cpu_pct, summary.mean_cpu_pct);
}

TEST(SamplerTest, ShortWindowStillHasOneSample) {
  ResourceSampler sampler("/proc", 20ms);
  sampler.Start();
  SamplingResult r = sampler.Stop();
  EXPECT_EQ(r.samples.size(), 1u);
}

TEST(SamplerTest, UnavailableProcfsDegradesToBestEffort) {
  ResourceSampler sampler("/nonexistent/proc", 20ms);
  sampler.Start();
  std::this_thread::sleep_for(30ms);
  SamplingResult r = sampler.Stop();
  EXPECT_TRUE(r.samples.empty());
  EXPECT_TRUE(r.best_effort);
  EXPECT_TRUE(HasErrorKind(ReadProcStat("/nonexistent/proc").status(),
                           error_kind::kSamplerUnavailable));
}

class ExecutorTest : public ::testing::Test {
 protected:
  void SetUp() override {
    StageArtifacts(dir_);
    ExecutorConfig config;
    config.artifact_dir = dir_.path();
    auto executor = Executor::Create(config, Engine());
    ASSERT_TRUE(executor.ok());
    executor_ = *std::move(executor);
    ASSERT_TRUE(executor_->PrecompileAll().ok());
  }

  test::TempDir dir_;
  std::unique_ptr<Executor> executor_;
};

void ExpectPhaseAccounting(const ResultFrame& r) {
  ASSERT_TRUE(r.phase_breakdown && r.total_us);
  EXPECT_LE(r.phase_breakdown->Sum(), *r.total_us + 1000);
}

TEST_F(ExecutorTest, ColdInvocationsMatchNativeOutputInBothModes) {
  protocol::InvokeFrame frame = IngestFrame();
  auto native = steps::RunStep(frame.step_id, frame.payload);
  ASSERT_TRUE(native.ok());
  for (CompileMode mode : {CompileMode::kJit, CompileMode::kAot}) {
    ResultFrame r = executor_->Invoke(frame, {mode, StatePolicy::kColdOneShot});
    ASSERT_EQ(r.status, ResultStatus::kOk) << (r.error ? r.error->message : "");
    EXPECT_EQ(r.payload, *native);
    EXPECT_EQ(r.instance, InstanceState::kCold);
    EXPECT_EQ(r.run_id, "run-1");
    EXPECT_EQ(r.step_id, frame.step_id);
    EXPECT_GT(r.phase_breakdown->compile_us, 0);
    EXPECT_GT(r.phase_breakdown->instantiate_us, 0);
    EXPECT_GT(r.phase_breakdown->execute_us, 0);
    EXPECT_FALSE(r.resource_samples->empty());
    ExpectPhaseAccounting(r);
  }
}

// Every step of a medium workflow, fan-out branches included, agrees with the
// native implementation in both modes and on cold and warm instances.
TEST_F(ExecutorTest, MediumWorkflowStepsMatchNative) {
  Bytes raw = payload::Generate({1, payload::SizeLabel::kMedium});
  auto s1 = steps::RunStep({StepKind::kS1, -1}, steps::MakeIngestInput(raw));
  ASSERT_TRUE(s1.ok());
  auto s2 = steps::RunStep({StepKind::kS2, -1}, *s1);
  ASSERT_TRUE(s2.ok());
  for (CompileMode mode : {CompileMode::kJit, CompileMode::kAot}) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int branch = 0; branch < 4; ++branch) {
        StepRef step{StepKind::kS3, branch};
        auto native = steps::RunStep(step, *s2);
        ASSERT_TRUE(native.ok());
        ResultFrame r = executor_->Invoke({step, "run-1", *s2}, {mode, StatePolicy::kWarmPool});
        ASSERT_EQ(r.status, ResultStatus::kOk)
            << "mode " << static_cast<int>(mode) << " pass " << pass << " branch " << branch
            << ": " << (r.error ? r.error->message : "");
        EXPECT_EQ(r.payload, *native);
      }
    }
  }
}

TEST_F(ExecutorTest, WarmPoolReusesInitializedInstance) {
  protocol::InvokeFrame frame = IngestFrame();
  ResultFrame first = executor_->Invoke(frame);
  ASSERT_EQ(first.status, ResultStatus::kOk);
  EXPECT_EQ(first.instance, InstanceState::kCold);
  for (int i = 0; i < 3; ++i) {
    ResultFrame warm = executor_->Invoke(frame);
    ASSERT_EQ(warm.status, ResultStatus::kOk);
    EXPECT_EQ(warm.instance, InstanceState::kWarm);
    EXPECT_EQ(warm.phase_breakdown->Startup(), 0);
    EXPECT_EQ(warm.payload, first.payload);
    ExpectPhaseAccounting(warm);
  }
  // Pools are per mode: the first AOT warm invocation is cold.
  EXPECT_EQ(executor_->Invoke(frame, {CompileMode::kAot, {}}).instance, InstanceState::kCold);
  EXPECT_EQ(executor_->Invoke(frame, {CompileMode::kAot, {}}).instance, InstanceState::kWarm);
}

TEST_F(ExecutorTest, ResetForcesColdStart) {
  protocol::InvokeFrame frame = IngestFrame();
  executor_->Invoke(frame);
  ResultFrame warm = executor_->Invoke(frame);
  EXPECT_EQ(warm.instance, InstanceState::kWarm);
  executor_->ResetPool();
  executor_->ResetPool();
  ResultFrame cold = executor_->Invoke(frame);
  EXPECT_EQ(cold.instance, InstanceState::kCold);
  EXPECT_GT(cold.phase_breakdown->instantiate_us, 0);
  EXPECT_GE(cold.phase_breakdown->compile_us + cold.phase_breakdown->instantiate_us,
            warm.phase_breakdown->compile_us + warm.phase_breakdown->instantiate_us);
}

TEST_F(ExecutorTest, StepErrorsAreFramesAndKeepTheInstance) {
  protocol::InvokeFrame frame = IngestFrame();
  auto data = steps::DecodeDataFrame(frame.payload);
  ASSERT_TRUE(data.ok());
  data->payload[0] ^= 0x01;  // keeps the original checksum
  frame.payload = steps::EncodeDataFrame(*data);
  ResultFrame r = executor_->Invoke(frame);
  ASSERT_EQ(r.status, ResultStatus::kError);
  EXPECT_EQ(r.error->code, "ChecksumMismatch");
  EXPECT_EQ(executor_->Invoke(IngestFrame()).instance, InstanceState::kWarm);

  protocol::InvokeFrame wrong_branch{{StepKind::kS3, 9}, "r", {}};
  ResultFrame unknown = executor_->Invoke(wrong_branch);
  ASSERT_EQ(unknown.status, ResultStatus::kError);
  EXPECT_EQ(unknown.error->code, "UnknownStep");
}

TEST_F(ExecutorTest, MissingArtifactIsReported) {
  std::filesystem::remove(AotPath(dir_.path(), StepKind::kS1));
  ResultFrame r = executor_->Invoke(IngestFrame(), {CompileMode::kAot, StatePolicy::kColdOneShot});
  ASSERT_EQ(r.status, ResultStatus::kError);
  EXPECT_EQ(r.error->code, error_kind::kMissingArtifact);
  ExpectPhaseAccounting(r);
}

TEST(ExecutorConfigTest, ValidatesFields) {
  ExecutorConfig config;
  EXPECT_FALSE(ValidateConfig(config).ok());
  config.artifact_dir = "/tmp";
  EXPECT_TRUE(ValidateConfig(config).ok());
  config.pool_size = 0;
  EXPECT_FALSE(ValidateConfig(config).ok());
  config.pool_size = 1;
  config.sample_period = 0us;
  EXPECT_FALSE(ValidateConfig(config).ok());
  EXPECT_EQ(*ParseStatePolicy("warm_pool"), StatePolicy::kWarmPool);
  EXPECT_EQ(*ParseStatePolicy("cold"), StatePolicy::kColdOneShot);
  EXPECT_EQ(*ParseCompileMode("aot"), CompileMode::kAot);
  EXPECT_FALSE(ParseCompileMode("interp").ok());
}

// Engine double with controllable call latency and failures.
class FakeEngine : public HostEngine {
 public:
  struct Knobs {
    std::chrono::milliseconds call_delay{0};
    std::atomic<bool> trap_next{false};
    std::atomic<int> instances_created{0};
  };

  explicit FakeEngine(std::shared_ptr<Knobs> knobs) : knobs_(std::move(knobs)) {}

  std::string Name() const override { return "fake"; }
  std::string Version() const override { return "0"; }
  absl::StatusOr<std::shared_ptr<const CompiledModule>> Compile(ByteSpan) override {
    return std::make_shared<CompiledModule>();
  }
  absl::StatusOr<Bytes> Precompile(ByteSpan wasm) override { return Bytes(wasm.begin(), wasm.end()); }
  absl::StatusOr<std::shared_ptr<const CompiledModule>> LoadPrecompiled(ByteSpan) override {
    return std::make_shared<CompiledModule>();
  }
  absl::StatusOr<std::unique_ptr<EngineInstance>> Instantiate(
      std::shared_ptr<const CompiledModule>) override {
    ++knobs_->instances_created;
    return std::unique_ptr<EngineInstance>(new Instance(knobs_));
  }

 private:
  class Instance : public EngineInstance {
   public:
    explicit Instance(std::shared_ptr<Knobs> knobs) : knobs_(std::move(knobs)) {}
    absl::Status Init() override { return absl::OkStatus(); }
    absl::StatusOr<Bytes> Call(ByteSpan) override {
      std::this_thread::sleep_for(knobs_->call_delay);
      if (knobs_->trap_next.exchange(false)) {
        return MakeError(absl::StatusCode::kInternal, error_kind::kStepTrap, "fake trap");
      }
      ResultFrame ok;
      ok.payload = {1};
      return protocol::EncodeFrame(ok);
    }

   private:
    std::shared_ptr<Knobs> knobs_;
  };

  std::shared_ptr<Knobs> knobs_;
};

std::unique_ptr<Executor> FakeExecutor(const test::TempDir& dir, std::shared_ptr<FakeEngine::Knobs> knobs,
                                       std::chrono::milliseconds timeout) {
  StageArtifacts(dir);
  ExecutorConfig config;
  config.artifact_dir = dir.path();
  config.timeout = timeout;
  return *Executor::Create(config, std::make_unique<FakeEngine>(std::move(knobs)));
}

TEST(ExecutorPoolTest, TrappedInstanceIsDiscarded) {
  test::TempDir dir;
  auto knobs = std::make_shared<FakeEngine::Knobs>();
  auto executor = FakeExecutor(dir, knobs, 1000ms);
  executor->Invoke(IngestFrame());
  knobs->trap_next = true;
  ResultFrame trapped = executor->Invoke(IngestFrame());
  EXPECT_EQ(trapped.error->code, error_kind::kStepTrap);
  EXPECT_EQ(trapped.instance, InstanceState::kWarm);
  EXPECT_EQ(executor->Invoke(IngestFrame()).instance, InstanceState::kCold);
  EXPECT_EQ(knobs->instances_created, 2);
}

TEST(ExecutorPoolTest, ExhaustedPoolTimesOut) {
  test::TempDir dir;
  auto knobs = std::make_shared<FakeEngine::Knobs>();
  knobs->call_delay = 400ms;
  auto executor = FakeExecutor(dir, knobs, 100ms);
  auto busy = std::async(std::launch::async, [&] { return executor->Invoke(IngestFrame()); });
  std::this_thread::sleep_for(50ms);
  ResultFrame rejected = executor->Invoke(IngestFrame());
  ASSERT_TRUE(rejected.error.has_value());
  EXPECT_EQ(rejected.error->code, error_kind::kPoolExhausted);
  EXPECT_EQ(busy.get().status, ResultStatus::kOk);
}

TEST(ExecutorPoolTest, WaitersAreServedWhenAnInstanceReturns) {
  test::TempDir dir;
  auto knobs = std::make_shared<FakeEngine::Knobs>();
  knobs->call_delay = 50ms;
  auto executor = FakeExecutor(dir, knobs, 5000ms);
  std::vector<std::future<ResultFrame>> calls;
  for (int i = 0; i < 4; ++i) {
    calls.push_back(std::async(std::launch::async, [&] { return executor->Invoke(IngestFrame()); }));
  }
  int warm = 0;
  for (auto& c : calls) {
    ResultFrame r = c.get();
    EXPECT_EQ(r.status, ResultStatus::kOk);
    warm += r.instance == InstanceState::kWarm;
  }
  EXPECT_EQ(warm, 3);
  EXPECT_EQ(knobs->instances_created, 1);
}

TEST(ExecutorPoolTest, ResetWhileLeasedDropsTheInstance) {
  test::TempDir dir;
  auto knobs = std::make_shared<FakeEngine::Knobs>();
  knobs->call_delay = 100ms;
  auto executor = FakeExecutor(dir, knobs, 5000ms);
  auto busy = std::async(std::launch::async, [&] { return executor->Invoke(IngestFrame()); });
  std::this_thread::sleep_for(30ms);
  executor->ResetPool();
  busy.get();
  EXPECT_EQ(executor->Invoke(IngestFrame()).instance, InstanceState::kCold);
}

}  // namespace
}  // namespace wasmflow::executor
