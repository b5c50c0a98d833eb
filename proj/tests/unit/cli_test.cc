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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "support/local_shim.h"
#include "support/temp_dir.h"
#include "wasmflow/cli/commands.h"
#include "wasmflow/cli/config.h"
#include "wasmflow/cli/lockfile.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"
#include "wasmflow/orchestrator/record.h"

namespace wasmflow::cli {
namespace {

using orchestrator::CellSpec;
using payload::SizeLabel;
using protocol::CompileMode;
using protocol::StatePolicy;

constexpr char kGridConfig[] = R"({
  "environments": {"edge": {"endpoint": "http://127.0.0.1:1"}},
  "cells": {"envs": ["edge"], "payloads": ["small", "medium"], "modes": ["jit", "aot"],
            "states": ["warm"]},
  "k": 4, "order_seed": 9
})";

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteAll(const std::filesystem::path& path, std::string_view text) {
  ASSERT_TRUE(WriteFileText(path.string(), text).ok());
}

TEST(ConfigTest, GridExpandsInNestingOrderWithDefaults) {
  auto config = ParseCampaignConfig(kGridConfig);
  ASSERT_TRUE(config.ok()) << config.status();
  ASSERT_EQ(config->plan.cells.size(), 4u);
  EXPECT_EQ(config->plan.cells[0].Id(), "edge/small/jit/warm");
  EXPECT_EQ(config->plan.cells[1].Id(), "edge/small/aot/warm");
  EXPECT_EQ(config->plan.cells[3].Id(), "edge/medium/aot/warm");
  EXPECT_EQ(config->plan.k, 4);
  EXPECT_EQ(config->plan.warmups, 3);
  EXPECT_EQ(config->plan.payload_seed, 42u);
  EXPECT_EQ(config->plan.order_seed, 9u);
  EXPECT_EQ(config->environments.at("edge").transport, "http");
  EXPECT_FALSE(config->throughput.has_value());
}

TEST(ConfigTest, DefaultKIsTwenty) {
  auto config = ParseCampaignConfig(R"({
    "environments": {"e": {"transport": "bridge", "endpoint": "127.0.0.1:0"}},
    "cells": [{"env": "e", "payload": "large", "mode": "aot", "state": "cold"}]})");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->plan.k, 20);
  EXPECT_EQ(config->plan.cells[0].Id(), "e/large/aot/cold");
}

TEST(ConfigTest, RejectsInvalidConfigs) {
  // Cell environment without an endpoint.
  EXPECT_FALSE(ParseCampaignConfig(R"({"environments": {},
    "cells": [{"env": "e", "payload": "small", "mode": "jit", "state": "warm"}]})")
                   .ok());
  EXPECT_FALSE(ParseCampaignConfig(R"({"environments": {"e": {"endpoint": "x"}},
    "cells": [{"env": "e", "payload": "huge", "mode": "jit", "state": "warm"}]})")
                   .ok());
  EXPECT_FALSE(ParseCampaignConfig(R"({"environments": {"e": {"endpoint": "x"}},
    "cells": [{"env": "e", "payload": "small", "mode": "jit", "state": "warm"}], "k": 0})")
                   .ok());
  EXPECT_FALSE(ParseCampaignConfig("[]").ok());
  EXPECT_FALSE(ParseCampaignConfig("{").ok());
  EXPECT_FALSE(ParseCampaignConfig(R"({"environments": {"e": {"endpoint": 3}}, "cells": []})")
                   .ok());
}

TEST(ConfigTest, OverridesReplaceFileValuesAndMergeCells) {
  auto config = ParseCampaignConfig(kGridConfig);
  ASSERT_TRUE(config.ok());
  ConfigOverrides overrides;
  overrides.k = 2;
  overrides.seed = 1;
  overrides.mode = CompileMode::kAot;
  overrides.out_dir = "elsewhere";
  ASSERT_TRUE(ApplyOverrides(overrides, *config).ok());
  EXPECT_EQ(config->plan.k, 2);
  EXPECT_EQ(config->plan.payload_seed, 1u);
  EXPECT_EQ(config->out_dir, "elsewhere");
  ASSERT_EQ(config->plan.cells.size(), 2u);
  EXPECT_EQ(config->plan.cells[0].Id(), "edge/small/aot/warm");
  EXPECT_EQ(config->plan.cells[1].Id(), "edge/medium/aot/warm");

  ConfigOverrides bad_env;
  bad_env.env = "nowhere";
  EXPECT_FALSE(ApplyOverrides(bad_env, *config).ok());
}

TEST(ConfigTest, HashTracksCampaignButNotOutputDirectory) {
  auto a = ParseCampaignConfig(kGridConfig);
  auto b = ParseCampaignConfig(kGridConfig);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(ConfigHash(*a), ConfigHash(*b));
  EXPECT_EQ(ConfigHash(*a).size(), 64u);
  b->out_dir = "other";
  EXPECT_EQ(ConfigHash(*a), ConfigHash(*b));
  b->plan.k = 5;
  EXPECT_NE(ConfigHash(*a), ConfigHash(*b));
}

// ---------------------------------------------------------------------------
// Lockfile

class LockfileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (protocol::StepKind kind : executor::kAllStepKinds) {
      std::filesystem::copy_file(executor::WasmPath(WASMFLOW_TEST_ARTIFACT_DIR, kind),
                                 executor::WasmPath(dir_.path(), kind));
    }
  }
  test::TempDir dir_;
};

TEST_F(LockfileTest, PinsFiveModulesReproducibly) {
  auto a = BuildLockfile(dir_.path(), nullptr);
  ASSERT_TRUE(a.ok()) << a.status();
  ASSERT_EQ(a->wasm.size(), 5u);
  EXPECT_TRUE(a->aot.empty());
  EXPECT_EQ(a->wasm[2].step, "S3");
  EXPECT_EQ(a->wasm[2].file, "step3.wasm");
  auto b = BuildLockfile(dir_.path(), nullptr);
  EXPECT_EQ(LockfileToJson(*a), LockfileToJson(*b));
  EXPECT_EQ(LockfileDigest(*a), LockfileDigest(*b));
  auto back = LockfileFromJson(LockfileToJson(*a));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, *a);
  EXPECT_TRUE(VerifyAgainstLockfile(*a, dir_.path()).ok());
}

TEST_F(LockfileTest, AotPinsObjectsAndSizes) {
  auto engine = executor::MakeWasmtimeEngine();
  ASSERT_TRUE(engine.ok());
  auto lock = BuildLockfile(dir_.path(), engine->get());
  ASSERT_TRUE(lock.ok()) << lock.status();
  ASSERT_EQ(lock->aot.size(), 5u);
  ASSERT_EQ(lock->sizes.size(), 5u);
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(lock->sizes[i].wasm_bytes, lock->wasm[i].bytes);
    EXPECT_EQ(lock->sizes[i].aot_bytes, lock->aot[i].bytes);
    EXPECT_EQ(lock->aot[i].file, "step" + std::to_string(i + 1) + ".cwasm");
  }
  auto again = BuildLockfile(dir_.path(), engine->get());
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(LockfileToJson(*lock), LockfileToJson(*again));
  auto back = LockfileFromJson(LockfileToJson(*lock));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, *lock);
}

TEST_F(LockfileTest, DetectsChangedAndMissingArtifacts) {
  auto lock = BuildLockfile(dir_.path(), nullptr);
  ASSERT_TRUE(lock.ok());
  const auto path = executor::WasmPath(dir_.path(), protocol::StepKind::kS4);
  {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out << '\0';
  }
  EXPECT_TRUE(HasErrorKind(VerifyAgainstLockfile(*lock, dir_.path()), error_kind::kBuildFailed));
  std::filesystem::remove(path);
  EXPECT_TRUE(HasErrorKind(BuildLockfile(dir_.path(), nullptr).status(), error_kind::kBuildFailed));
}

TEST(SizeTableTest, FixtureSizesGiveRoundedIncreases) {
  std::vector<executor::ArtifactSizeEntry> entries = {
      executor::MakeSizeEntry(protocol::StepKind::kS1, 152000, 342000),
      executor::MakeSizeEntry(protocol::StepKind::kS5, 153000, 360000)};
  EXPECT_EQ(FormatSizeTable(entries),
            "step  wasm_mb  aot_mb  increase\n"
            "S1      0.152   0.342  +125%\n"
            "S5      0.153   0.360  +135%\n");
}

// ---------------------------------------------------------------------------
// Subcommands

TEST(CmdGenPayloadTest, WritesGeneratorBytes) {
  test::TempDir dir;
  GenPayloadOptions options;
  options.seed = 7;
  options.size = SizeLabel::kMedium;
  options.out_path = (dir.path() / "p.bin").string();
  std::ostringstream out, err;
  ASSERT_EQ(CmdGenPayload(options, out, err), kExitOk);
  auto bytes = ReadFileBytes(*options.out_path);
  ASSERT_TRUE(bytes.ok());
  EXPECT_EQ(*bytes, payload::Generate({7, SizeLabel::kMedium}));
  EXPECT_NE(err.str().find(ToHex(Blake3Digest(*bytes))), std::string::npos);

  std::ostringstream raw;
  options.out_path.reset();
  options.size = SizeLabel::kSmall;
  ASSERT_EQ(CmdGenPayload(options, raw, err), kExitOk);
  EXPECT_EQ(raw.str().size(), 16384u);
}

TEST(CmdSizesTest, MissingObjectsIsUsageError) {
  test::TempDir dir;
  SizesOptions options;
  options.artifact_dir = dir.path();
  std::ostringstream out, err;
  EXPECT_EQ(CmdSizes(options, out, err), kExitUsage);
  EXPECT_NE(err.str().find("MissingArtifact"), std::string::npos);
}

class CmdRunTest : public ::testing::Test {
 protected:
  std::string WriteConfig(const std::string& endpoint, const std::string& extra = "") {
    const auto path = dir_.path() / "campaign.json";
    WriteAll(path, R"({
      "environments": {"edge": {"endpoint": ")" + endpoint + R"("}},
      "cells": [{"env": "edge", "payload": "small", "mode": "jit", "state": "warm"}],
      "k": 2, "warmups": 1, "order_seed": 3,
      "out": ")" + (dir_.path() / "out").string() + "\"" + extra + "}");
    return path.string();
  }

  test::TempDir dir_;
};

TEST_F(CmdRunTest, DryRunPrintsReproduciblePermutation) {
  RunOptions options;
  options.config_path = WriteConfig("http://127.0.0.1:1");
  options.dry_run = true;
  options.overrides.k = 5;
  std::ostringstream a, b, err;
  ASSERT_EQ(CmdRun(options, a, err), kExitOk) << err.str();
  ASSERT_EQ(CmdRun(options, b, err), kExitOk);
  EXPECT_EQ(a.str(), b.str());
  auto plan = orchestrator::PlanOrder(
      {CellSpec{"edge", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool}}, 5, 3);
  std::string expected_tail;
  for (size_t i = 0; i < plan.size(); ++i) {
    expected_tail += std::to_string(i) + "\t" + plan[i].run_id + "\n";
  }
  EXPECT_TRUE(a.str().ends_with(expected_tail)) << a.str();
  EXPECT_FALSE(std::filesystem::exists(dir_.path() / "out"));
}

TEST_F(CmdRunTest, UnreachableBackendFlagsCellAndFails) {
  RunOptions options;
  options.config_path = WriteConfig("http://127.0.0.1:1");
  std::ostringstream out, err;
  EXPECT_EQ(CmdRun(options, out, err), kExitBackendFailure);
  auto records = orchestrator::ReadRecordLog((dir_.path() / "out" / kRecordLogName).string());
  ASSERT_TRUE(records.ok());
  ASSERT_EQ(records->size(), 2u);
  for (const auto& r : *records) {
    ASSERT_TRUE(r.Discarded());
    EXPECT_TRUE(r.discard_reason->starts_with("BackendUnavailable")) << *r.discard_reason;
  }
  EXPECT_NE(err.str().find("edge"), std::string::npos);
}

TEST_F(CmdRunTest, BadUsageExitsOne) {
  RunOptions options;
  options.config_path = (dir_.path() / "missing.json").string();
  std::ostringstream out, err;
  EXPECT_EQ(CmdRun(options, out, err), kExitUsage);
  options.config_path = WriteConfig("http://127.0.0.1:1");
  options.overrides.env = "nowhere";
  EXPECT_EQ(CmdRun(options, out, err), kExitUsage);
}

TEST_F(CmdRunTest, CampaignThenAnalyzeAgainstRealShim) {
  auto shim = test::LocalShim::Start();
  ASSERT_TRUE(shim.ok()) << shim.status();
  // Pin the shim's artifacts so provenance carries a lockfile digest.
  BuildOptions build;
  build.artifact_dir = (*shim)->artifact_dir();
  build.lockfile = dir_.path() / "lock.json";
  std::ostringstream out, err;
  ASSERT_EQ(CmdBuild(build, out, err), kExitOk) << err.str();

  RunOptions options;
  options.config_path = WriteConfig(
      (*shim)->base_url(),
      R"(, "throughput": {"cells": [{"env": "edge", "payload": "small", "mode": "jit",
          "state": "warm"}], "duration_ms": 300})");
  options.lockfile = build.lockfile.string();
  ASSERT_EQ(CmdRun(options, out, err), kExitOk) << err.str();
  const auto log = dir_.path() / "out" / kRecordLogName;
  auto records = orchestrator::ReadRecordLog(log.string());
  ASSERT_TRUE(records.ok());
  ASSERT_EQ(records->size(), 2u);
  for (const auto& r : *records) EXPECT_EQ(r.verification, orchestrator::Verification::kOk);

  // A second campaign into the same directory is refused.
  EXPECT_EQ(CmdRun(options, out, err), kExitUsage);

  AnalyzeOptions analyze;
  analyze.log_path = log.string();
  analyze.out_dir = (dir_.path() / "r1").string();
  ASSERT_EQ(CmdAnalyze(analyze, out, err), kExitOk) << err.str();
  analyze.out_dir = (dir_.path() / "r2").string();
  ASSERT_EQ(CmdAnalyze(analyze, out, err), kExitOk);
  const std::string lock_text = ReadAll(build.lockfile);
  const std::string lock_digest = LockfileDigest(*LockfileFromJson(lock_text));
  for (const char* name : {"startup.csv", "step_latency.csv", "makespan.csv", "throughput.csv",
                           "resources.csv", "artifact_sizes.csv", "report.json"}) {
    const std::string a = ReadAll(dir_.path() / "r1" / name);
    EXPECT_EQ(a, ReadAll(dir_.path() / "r2" / name)) << name;
    EXPECT_NE(a.find(lock_digest), std::string::npos) << name;
    EXPECT_NE(a.find("config_hash"), std::string::npos) << name;
  }
  const std::string sizes = ReadAll(dir_.path() / "r1" / "artifact_sizes.csv");
  EXPECT_NE(sizes.find("edge,S3,"), std::string::npos);
  const std::string throughput = ReadAll(dir_.path() / "r1" / "throughput.csv");
  EXPECT_NE(throughput.find("edge,small,jit,warm,1,"), std::string::npos);
}

TEST(CmdAnalyzeTest, TruncatedLogNeedsIgnorePartial) {
  test::TempDir dir;
  orchestrator::RunRecord record;
  record.run_id = "edge/small/jit/warm-0-x";
  record.cell = CellSpec{"edge", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool};
  orchestrator::StepSpan span;
  span.step = {protocol::StepKind::kS1, -1};
  span.end_us = 10;
  record.spans = {span};
  record.makespan_us = 10;
  record.verification = orchestrator::Verification::kOk;
  const std::string line = orchestrator::RecordToJsonLine(record);
  const auto log = dir.path() / "runs.jsonl";
  WriteAll(log, line + "\n" + line.substr(0, line.size() / 2));

  AnalyzeOptions options;
  options.log_path = log.string();
  std::ostringstream out, err;
  EXPECT_EQ(CmdAnalyze(options, out, err), kExitUsage);
  EXPECT_NE(err.str().find("CorruptLog"), std::string::npos);
  EXPECT_NE(err.str().find("runs.jsonl:2:"), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("--ignore-partial"), std::string::npos);

  options.ignore_partial = true;
  EXPECT_EQ(CmdAnalyze(options, out, err), kExitOk) << err.str();
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "report" / "report.json"));
}

}  // namespace
}  // namespace wasmflow::cli
