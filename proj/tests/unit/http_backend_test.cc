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

#include "wasmflow/orchestrator/http_backend.h"

#include <filesystem>

#include "gtest/gtest.h"
#include "support/temp_dir.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/executor/executor.h"
#include "wasmflow/executor/shim_server.h"
#include "wasmflow/orchestrator/workflow.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::orchestrator {
namespace {

using namespace std::chrono_literals;

class HttpBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (StepKind kind : executor::kAllStepKinds) {
      std::filesystem::copy_file(executor::WasmPath(WASMFLOW_TEST_ARTIFACT_DIR, kind),
                                 executor::WasmPath(dir_.path(), kind));
    }
    executor::ExecutorConfig config;
    config.artifact_dir = dir_.path();
    config.pool_size = 4;
    executor_ = *executor::Executor::Create(config, *executor::MakeWasmtimeEngine());
    ASSERT_TRUE(executor_->PrecompileAll().ok());
    server_ = std::make_unique<executor::ShimServer>(*executor_);
    auto port = server_->Start("127.0.0.1", 0);
    ASSERT_TRUE(port.ok()) << port.status();
    base_url_ = "http://127.0.0.1:" + std::to_string(*port);
  }

  void TearDown() override { server_->Stop(); }

  WorkflowRequest Request(CompileMode mode, StatePolicy state) {
    raw_ = payload::Generate({1, payload::SizeLabel::kSmall});
    WorkflowRequest request;
    request.cell = CellSpec{"edge", payload::SizeLabel::kSmall, mode, state};
    request.run_id = "http-run";
    request.seed = 1;
    request.raw = raw_;
    request.expected = steps::GoldenDigest(1, payload::SizeLabel::kSmall);
    return request;
  }

  test::TempDir dir_;
  std::unique_ptr<executor::Executor> executor_;
  std::unique_ptr<executor::ShimServer> server_;
  std::string base_url_;
  Bytes raw_;
};

TEST_F(HttpBackendTest, WorkflowVerifiesInBothModes) {
  auto backend = HttpBackend::Create("edge", base_url_, 60s);
  ASSERT_TRUE(backend.ok());
  ASSERT_TRUE((*backend)->Health().ok());
  for (CompileMode mode : {CompileMode::kJit, CompileMode::kAot}) {
    RunRecord record = ExecuteWorkflow(**backend, Request(mode, StatePolicy::kColdOneShot));
    ASSERT_FALSE(record.Discarded()) << *record.discard_reason;
    EXPECT_EQ(record.verification, Verification::kOk);
    EXPECT_EQ(record.state_observed, InstanceState::kCold);
    for (const StepSpan& s : record.spans) {
      ASSERT_TRUE(s.phases && s.executor_total_us);
      EXPECT_GT(s.phases->compile_us, 0);
      EXPECT_LE(*s.executor_total_us, s.Duration());
    }
  }
}

TEST_F(HttpBackendTest, WarmStateAndReset) {
  auto backend = HttpBackend::Create("edge", base_url_, 60s);
  ASSERT_TRUE(backend.ok());
  RunRecord first = ExecuteWorkflow(**backend, Request(CompileMode::kJit, StatePolicy::kWarmPool));
  ASSERT_EQ(first.verification, Verification::kOk);
  // With every S3 branch already instantiated once, S1/S2/S4/S5 are warm.
  RunRecord second = ExecuteWorkflow(**backend, Request(CompileMode::kJit, StatePolicy::kWarmPool));
  ASSERT_EQ(second.verification, Verification::kOk);
  EXPECT_EQ(second.SpanOf({StepKind::kS1, -1})->instance, InstanceState::kWarm);
  EXPECT_EQ(second.SpanOf({StepKind::kS1, -1})->phases->compile_us, 0);

  ASSERT_TRUE((*backend)->ResetPool().ok());
  RunRecord third = ExecuteWorkflow(**backend, Request(CompileMode::kJit, StatePolicy::kWarmPool));
  EXPECT_EQ(third.SpanOf({StepKind::kS1, -1})->instance, InstanceState::kCold);
}

TEST_F(HttpBackendTest, MultipartTransportGivesSameDigest) {
  // A 1-byte threshold sends every payload as a separate part.
  auto backend = HttpBackend::Create("edge", base_url_, 60s, 1);
  ASSERT_TRUE(backend.ok());
  RunRecord record = ExecuteWorkflow(**backend, Request(CompileMode::kAot, StatePolicy::kWarmPool));
  ASSERT_FALSE(record.Discarded()) << *record.discard_reason;
  EXPECT_EQ(record.verification, Verification::kOk);
}

TEST_F(HttpBackendTest, UnreachableServerIsBackendUnavailable) {
  server_->Stop();
  auto backend = HttpBackend::Create("edge", base_url_, 2s);
  ASSERT_TRUE(backend.ok());
  EXPECT_TRUE(HasErrorKind((*backend)->Health(), error_kind::kBackendUnavailable));
  RunRecord record = ExecuteWorkflow(**backend, Request(CompileMode::kJit, StatePolicy::kWarmPool));
  ASSERT_TRUE(record.Discarded());
  EXPECT_EQ(record.discard_reason->rfind("BackendUnavailable", 0), 0u);
}

}  // namespace
}  // namespace wasmflow::orchestrator
