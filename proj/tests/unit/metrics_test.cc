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
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "support/stats_oracle.h"
#include "support/temp_dir.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/metrics/reports.h"
#include "wasmflow/metrics/stats.h"

namespace wasmflow::metrics {
namespace {

using orchestrator::CellSpec;
using orchestrator::RunRecord;
using orchestrator::StepSpan;
using protocol::StatePolicy;
using protocol::StepKind;
using protocol::StepRef;

TEST(StatsTest, FiveSamples) {
  std::vector<double> x = {5, 3, 1, 4, 2};
  auto s = Summarize(x);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->n, 5u);
  EXPECT_EQ(s->median, 3);
  EXPECT_EQ(s->p25, 2);
  EXPECT_EQ(s->p75, 4);
  EXPECT_EQ(s->iqr, 2);
  EXPECT_EQ(s->outliers_removed, 0u);
  EXPECT_LE(s->ci95_low, s->median);
  EXPECT_GE(s->ci95_high, s->median);
}

TEST(StatsTest, SingleSample) {
  std::vector<double> x = {7};
  auto s = Summarize(x);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->n, 1u);
  EXPECT_EQ(s->median, 7);
  EXPECT_EQ(s->p25, 7);
  EXPECT_EQ(s->p75, 7);
  EXPECT_EQ(s->iqr, 0);
  EXPECT_EQ(s->ci95_low, 7);
  EXPECT_EQ(s->ci95_high, 7);
}

TEST(StatsTest, EmptyInputIsAnError) {
  auto s = Summarize(std::vector<double>{});
  ASSERT_FALSE(s.ok());
  EXPECT_TRUE(HasErrorKind(s.status(), error_kind::kEmptyInput));
}

TEST(StatsTest, LinearInterpolation) {
  std::vector<double> x = {10, 20, 30, 40};
  EXPECT_DOUBLE_EQ(PercentileSorted(x, 0.5), 25);
  EXPECT_DOUBLE_EQ(PercentileSorted(x, 0.25), 17.5);
  EXPECT_DOUBLE_EQ(PercentileSorted(x, 0.75), 32.5);
  EXPECT_DOUBLE_EQ(PercentileSorted(x, 0.0), 10);
  EXPECT_DOUBLE_EQ(PercentileSorted(x, 1.0), 40);
}

TEST(OutlierTest, RemovesFarPoint) {
  std::vector<double> x = {1, 1, 1, 1, 100};
  OutlierSplit split = FilterOutliers(x);
  EXPECT_EQ(split.kept, (std::vector<double>{1, 1, 1, 1}));
  EXPECT_EQ(split.removed, std::vector<double>{100});
  auto s = Summarize(x);
  EXPECT_EQ(s->n, 4u);
  EXPECT_EQ(s->outliers_removed, 1u);
  EXPECT_EQ(s->median, 1);
}

TEST(OutlierTest, AllEqualKeepsEverything) {
  std::vector<double> x(17, 4.25);
  OutlierSplit split = FilterOutliers(x);
  EXPECT_EQ(split.kept.size(), 17u);
  EXPECT_TRUE(split.removed.empty());
}

TEST(OutlierTest, AppliedOnceNotIterated) {
  // After removing 1000, the fences of the remainder would exclude 17; a
  // single pass must keep it.
  std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 17, 1000};
  OutlierSplit split = FilterOutliers(x);
  EXPECT_EQ(split.removed, (std::vector<double>{1000}));
  // A second pass would remove 17.
  EXPECT_EQ(test::OracleFilter(split.kept).removed, std::vector<double>{17});
}

TEST(StatsTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<double> x = test::RandomSampleSet(rng, 1 + rng() % 400);
    auto s = Summarize(x, 99, 200);
    ASSERT_TRUE(s.ok());
    test::OracleSummary o = test::OracleSummarize(x, 99, 200);
    ASSERT_EQ(s->n, o.n) << trial;
    ASSERT_EQ(s->outliers_removed, o.outliers_removed) << trial;
    ASSERT_EQ(s->median, o.median) << trial;
    ASSERT_EQ(s->p25, o.p25) << trial;
    ASSERT_EQ(s->p75, o.p75) << trial;
    ASSERT_EQ(s->iqr, o.iqr) << trial;
    ASSERT_EQ(s->ci95_low, o.ci95_low) << trial;
    ASSERT_EQ(s->ci95_high, o.ci95_high) << trial;
  }
}

TEST(BootstrapTest, DeterministicAndContainsMedian) {
  std::mt19937_64 rng(5);
  std::vector<double> x = test::RandomSampleSet(rng, 300);
  auto a = BootstrapMedianCi95(x, 17);
  auto b = BootstrapMedianCi95(x, 17);
  auto c = BootstrapMedianCi95(x, 18);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  double median = PercentileSorted(sorted, 0.5);
  EXPECT_LE(a.first, median);
  EXPECT_GE(a.second, median);
  EXPECT_LT(a.first, a.second);
}

// ---------------------------------------------------------------------------
// Reports

RunRecord MakeRecord(const CellSpec& cell, int rep, int64_t base) {
  RunRecord r;
  r.run_id = cell.Id() + "-" + std::to_string(rep);
  r.cell = cell;
  r.repetition = rep;
  r.seed = 42;
  int64_t t = 1000;
  auto add = [&](StepRef step, int64_t start, int64_t duration) {
    StepSpan s;
    s.step = step;
    s.start_us = start;
    s.end_us = start + duration;
    protocol::PhaseBreakdown p;
    p.load_us = 10;
    p.compile_us = cell.state == StatePolicy::kColdOneShot ? 500 + rep : 0;
    p.instantiate_us = cell.state == StatePolicy::kColdOneShot ? 50 : 0;
    p.execute_us = duration - 100;
    s.phases = p;
    s.instance = cell.state == StatePolicy::kColdOneShot ? protocol::InstanceState::kCold
                                                         : protocol::InstanceState::kWarm;
    s.resource_samples = {{start + 1, 50.0 + rep, 1000u + rep}, {start + 2, 90.0, 2000}};
    r.spans.push_back(s);
  };
  add({StepKind::kS1, -1}, t, base);
  add({StepKind::kS2, -1}, t + base, base);
  for (int b = 0; b < 4; ++b) add({StepKind::kS3, b}, t + 2 * base, base + b);
  add({StepKind::kS4, -1}, t + 3 * base + 3, base);
  add({StepKind::kS5, -1}, t + 4 * base + 3, base);
  r.makespan_us = 5 * base + 3;
  r.state_observed = r.spans.front().instance.value();
  r.verification = orchestrator::Verification::kOk;
  r.final_digest = std::string(64, '0');
  return r;
}

ReportContext Context() {
  ReportContext c;
  c.provenance = {{"lockfile_digest", "abc123"}, {"config_hash", "def456"}};
  c.artifact_sizes["edge"] = {{"S1", 152000, 342000, 125}, {"S2", 135000, 317000, 135}};
  orchestrator::ThroughputResult t;
  t.cell = CellSpec{"edge", payload::SizeLabel::kSmall, protocol::CompileMode::kAot,
                    StatePolicy::kWarmPool};
  t.completed = 100;
  t.elapsed_s = 10.0;
  t.per_second = 10.0;
  c.throughput = {t};
  return c;
}

std::vector<std::string> DataLines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

TEST(ReportsTest, WarmCellStepLatencyHasPooledAndBranchRows) {
  CellSpec cell{"edge", payload::SizeLabel::kSmall, protocol::CompileMode::kJit,
                StatePolicy::kWarmPool};
  std::vector<RunRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back(MakeRecord(cell, i, 200 + i));
  auto bundle = BuildReports(records, Context());
  ASSERT_TRUE(bundle.ok()) << bundle.status();
  const ReportFile* latency = bundle->Find("step_latency.csv");
  ASSERT_NE(latency, nullptr);
  auto lines = DataLines(latency->content);
  ASSERT_EQ(lines.size(), 1u + 5 + 4);  // header, S1..S5, S3[0..3]
  EXPECT_EQ(lines[0].substr(0, 38), "env,payload,mode,state,step,n,median,p");
  std::vector<std::string> steps;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string rest = lines[i].substr(std::string("edge,small,jit,warm,").size());
    steps.push_back(rest.substr(0, rest.find(',')));
  }
  EXPECT_EQ(steps, (std::vector<std::string>{"S1", "S2", "S3", "S3[0]", "S3[1]", "S3[2]", "S3[3]",
                                             "S4", "S5"}));
  EXPECT_TRUE(bundle->incomplete_cells.empty());
}

TEST(ReportsTest, EveryFileCarriesProvenanceAndFooter) {
  CellSpec cell{"edge", payload::SizeLabel::kMedium, protocol::CompileMode::kAot,
                StatePolicy::kColdOneShot};
  std::vector<RunRecord> records;
  for (int i = 0; i < 4; ++i) records.push_back(MakeRecord(cell, i, 300));
  RunRecord discarded = MakeRecord(cell, 4, 300);
  discarded.discard_reason = "StepFailed: S2: StepTrap: x";
  records.push_back(discarded);
  RunRecord failed = MakeRecord(cell, 5, 300);
  failed.verification = orchestrator::Verification::kFail;
  records.push_back(failed);

  auto bundle = BuildReports(records, Context());
  ASSERT_TRUE(bundle.ok());
  EXPECT_EQ(bundle->used_records, 4u);
  EXPECT_EQ(bundle->discarded_records, 1u);
  EXPECT_EQ(bundle->verification_failed_records, 1u);
  // k inferred as 6 from the repetition indices; only 4 usable.
  EXPECT_EQ(bundle->incomplete_cells, std::vector<std::string>{"edge/medium/aot/cold"});

  std::vector<std::string> names;
  for (const ReportFile& f : bundle->files) {
    names.push_back(f.name);
    EXPECT_NE(f.content.find("abc123"), std::string::npos) << f.name;
    EXPECT_NE(f.content.find("def456"), std::string::npos) << f.name;
    if (f.name.ends_with(".csv")) {
      EXPECT_NE(f.content.find("# discarded_records: 1\n"), std::string::npos) << f.name;
      EXPECT_NE(f.content.find("# incomplete_cells: edge/medium/aot/cold\n"), std::string::npos);
    }
  }
  EXPECT_EQ(names, (std::vector<std::string>{"startup.csv", "step_latency.csv", "makespan.csv",
                                             "throughput.csv", "resources.csv",
                                             "artifact_sizes.csv", "report.json"}));

  auto json = nlohmann::json::parse(bundle->Find("report.json")->content);
  EXPECT_EQ(json["summary"]["discarded_records"], 1);
  EXPECT_EQ(json["provenance"]["config_hash"], "def456");
  // Cold startup rows: compile = 500 + rep for reps 0..3.
  bool found = false;
  for (const auto& row : json["startup"]["rows"]) {
    if (row["step"] == "S1" && row["phase"] == "compile") {
      EXPECT_DOUBLE_EQ(row["median"].get<double>(), 501.5);
      EXPECT_EQ(row["n"], 4);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(ReportsTest, MakespanAndResourceColumns) {
  CellSpec cell{"edge", payload::SizeLabel::kLarge, protocol::CompileMode::kJit,
                StatePolicy::kWarmPool};
  std::vector<RunRecord> records = {MakeRecord(cell, 0, 1000)};
  auto bundle = BuildReports(records, Context());
  ASSERT_TRUE(bundle.ok());
  auto json = nlohmann::json::parse(bundle->Find("report.json")->content);
  const auto& m = json["makespan"]["rows"][0];
  EXPECT_EQ(m["median"].get<double>(), 5003);
  EXPECT_EQ(m["span_sum_median"].get<double>(), 8000 + 6);
  EXPECT_EQ(m["critical_path_median"].get<double>(), 5003);
  EXPECT_EQ(m["s3_max_overlap_median"].get<double>(), 4);
  const auto& r = json["resources"]["rows"][0];
  EXPECT_EQ(r["step"], "S1");
  EXPECT_EQ(r["samples"], 2);
  EXPECT_DOUBLE_EQ(r["cpu_pct_mean"].get<double>(), 70.0);
  EXPECT_DOUBLE_EQ(r["cpu_pct_peak"].get<double>(), 90.0);
  EXPECT_EQ(r["rss_bytes_peak"], 2000);
}

TEST(ReportsTest, ArtifactSizesMirrorSizeReport) {
  auto bundle = BuildReports({}, Context());
  ASSERT_TRUE(bundle.ok());
  auto lines = DataLines(bundle->Find("artifact_sizes.csv")->content);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "env,step,wasm_bytes,aot_bytes,wasm_mb,aot_mb,increase_pct");
  EXPECT_EQ(lines[1], "edge,S1,152000,342000,0.152,0.342,+125");
  EXPECT_EQ(lines[2], "edge,S2,135000,317000,0.135,0.317,+135");
  auto throughput = DataLines(bundle->Find("throughput.csv")->content);
  ASSERT_EQ(throughput.size(), 2u);
  EXPECT_EQ(throughput[1], "edge,small,aot,warm,1,100,0,10.000,10.000");
}

TEST(ReportsTest, RegenerationIsByteIdentical) {
  CellSpec warm{"edge", payload::SizeLabel::kSmall, protocol::CompileMode::kJit,
                StatePolicy::kWarmPool};
  CellSpec cold{"edge", payload::SizeLabel::kSmall, protocol::CompileMode::kAot,
                StatePolicy::kColdOneShot};
  std::vector<RunRecord> records;
  for (int i = 0; i < 20; ++i) {
    records.push_back(MakeRecord(i % 2 ? warm : cold, i / 2, 100 + (i * 37) % 50));
  }
  auto a = BuildReports(records, Context());
  auto b = BuildReports(records, Context());
  ASSERT_TRUE(a.ok() && b.ok());
  ASSERT_EQ(a->files.size(), b->files.size());
  for (size_t i = 0; i < a->files.size(); ++i) {
    EXPECT_EQ(a->files[i].content, b->files[i].content) << a->files[i].name;
  }
  test::TempDir dir;
  ASSERT_TRUE(WriteReports(*a, dir.path() / "out").ok());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / "report.json"));
}

TEST(ReportsTest, NothingToReportIsEmptyInput) {
  auto bundle = BuildReports({}, ReportContext{});
  ASSERT_FALSE(bundle.ok());
  EXPECT_TRUE(HasErrorKind(bundle.status(), error_kind::kEmptyInput));
}

TEST(ReportContextTest, JsonRoundTrip) {
  ReportContext c = Context();
  c.expected_k = 20;
  c.bootstrap_seed = 9;
  auto back = ReportContextFromJson(ReportContextToJson(c));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->provenance, c.provenance);
  EXPECT_EQ(back->artifact_sizes, c.artifact_sizes);
  EXPECT_EQ(back->expected_k, 20);
  EXPECT_EQ(back->bootstrap_seed, 9u);
  ASSERT_EQ(back->throughput.size(), 1u);
  EXPECT_EQ(back->throughput[0].cell, c.throughput[0].cell);
  EXPECT_EQ(back->throughput[0].per_second, 10.0);
  EXPECT_FALSE(ReportContextFromJson("[1]").ok());
  EXPECT_FALSE(ReportContextFromJson("{\"throughput\":[{\"cell\":3}]}").ok());
}

}  // namespace
}  // namespace wasmflow::metrics
