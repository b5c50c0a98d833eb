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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/local_shim.h"
#include "support/stats_oracle.h"
#include "wasmflow/common/util.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/metrics/stats.h"
#include "wasmflow/orchestrator/campaign.h"
#include "wasmflow/orchestrator/dag.h"
#include "wasmflow/orchestrator/http_backend.h"
#include "wasmflow/orchestrator/stub_backend.h"
#include "wasmflow/orchestrator/workflow.h"
#include "wasmflow/protocol/frames.h"
#include "wasmflow/protocol/multipart.h"
#include "wasmflow/steps/steps.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::acceptance {
namespace {

using namespace std::chrono_literals;
using orchestrator::CellSpec;
using orchestrator::RunRecord;
using orchestrator::StepSpan;
using payload::SizeLabel;
using protocol::CompileMode;
using protocol::StatePolicy;
using protocol::StepKind;
using protocol::StepRef;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return metrics::PercentileSorted(v, 0.5);
}

// Shared wasm backend and campaign records, created on first use.
class Fixture {
 public:
  absl::Status EnsureShim() {
    if (shim_) return absl::OkStatus();
    // Four warm instances per step so the S3 branches can run concurrently.
    auto shim = test::LocalShim::Start(/*pool_size=*/4);
    if (!shim.ok()) return shim.status();
    shim_ = *std::move(shim);
    auto backend = orchestrator::HttpBackend::Create("edge", shim_->base_url(), 600s);
    if (!backend.ok()) return backend.status();
    backend_ = *std::move(backend);
    return absl::OkStatus();
  }

  orchestrator::Backend& backend() { return *backend_; }

  // Small payload, both modes, cold and warm, k=20; plus the large class
  // (warm, both modes, k=5) for the makespan structure.
  absl::StatusOr<const std::vector<RunRecord>*> Campaign() {
    if (campaign_done_) return &records_;
    if (auto s = EnsureShim(); !s.ok()) return s;
    orchestrator::BackendMap backends = {{"edge", backend_.get()}};
    orchestrator::MemoryRecordSink sink;
    orchestrator::PlanConfig small;
    for (CompileMode mode : {CompileMode::kJit, CompileMode::kAot}) {
      for (StatePolicy state : {StatePolicy::kColdOneShot, StatePolicy::kWarmPool}) {
        small.cells.push_back(CellSpec{"edge", SizeLabel::kSmall, mode, state});
      }
    }
    small.k = 20;
    small.warmups = 3;
    auto summary = orchestrator::RunPlan(backends, small, sink);
    if (!summary.ok()) return summary.status();

    orchestrator::PlanConfig large;
    large.cells = {CellSpec{"edge", SizeLabel::kLarge, CompileMode::kJit, StatePolicy::kWarmPool},
                   CellSpec{"edge", SizeLabel::kLarge, CompileMode::kAot, StatePolicy::kWarmPool}};
    large.k = 5;
    large.warmups = 1;
    large.order_seed = 2;
    summary = orchestrator::RunPlan(backends, large, sink);
    if (!summary.ok()) return summary.status();
    records_ = sink.records();
    campaign_done_ = true;
    return &records_;
  }

 private:
  std::unique_ptr<test::LocalShim> shim_;
  std::unique_ptr<orchestrator::Backend> backend_;
  std::vector<RunRecord> records_;
  bool campaign_done_ = false;
};

Fixture& Shared() {
  static Fixture* fixture = new Fixture();
  return *fixture;
}

// 1 ---------------------------------------------------------------------------
Outcome KernelSizing() {
  const int s = steps::DOf(SizeLabel::kSmall);
  const int m = steps::DOf(SizeLabel::kMedium);
  const int l = steps::DOf(SizeLabel::kLarge);
  return {s == 64 && m == 512 && l == 1024, Fmt("d_of small=%.0f medium=%.0f large=%.0f", s, m, l)};
}

// 2 ---------------------------------------------------------------------------
Outcome ArtifactSizeAccounting() {
  struct Row {
    StepKind step;
    uint64_t wasm, aot;
    int64_t expected;
  };
  const Row rows[] = {{StepKind::kS1, 152000, 342000, 125},
                      {StepKind::kS2, 135000, 317000, 135},
                      {StepKind::kS3, 141000, 322000, 128},
                      {StepKind::kS4, 151000, 354000, 134},
                      {StepKind::kS5, 153000, 360000, 135}};
  bool ok = true;
  std::string got;
  for (const Row& r : rows) {
    auto e = executor::MakeSizeEntry(r.step, r.wasm, r.aot);
    ok = ok && e.pct_increase == r.expected;
    got += (got.empty() ? "" : " ") + protocol::StepKindName(r.step) + "=+" +
           std::to_string(e.pct_increase);
  }
  // Same numbers through the directory scan used by the shim.
  test::TempDir dir;
  for (const Row& r : rows) {
    ok = ok && WriteFileBytes(executor::WasmPath(dir.path(), r.step).string(), Bytes(r.wasm)).ok();
    ok = ok && WriteFileBytes(executor::AotPath(dir.path(), r.step).string(), Bytes(r.aot)).ok();
  }
  auto scanned = executor::ReportArtifactSizes(dir.path());
  ok = ok && scanned.ok() && scanned->size() == 5;
  for (size_t i = 0; ok && i < 5; ++i) ok = (*scanned)[i].pct_increase == rows[i].expected;
  return {ok, got};
}

// 3 ---------------------------------------------------------------------------
Outcome OracleEquivalence() {
  if (auto s = Shared().EnsureShim(); !s.ok()) return {false, std::string(s.message())};
  int checked = 0;
  for (uint64_t seed : {1u, 42u}) {
    for (SizeLabel size : payload::kAllSizes) {
      Bytes raw = payload::Generate({seed, size});
      auto native = steps::RunNativePipeline(raw);
      if (!native.ok()) return {false, "native pipeline: " + std::string(native.status().message())};
      const std::string want = ToHex(native->final_digest);
      for (CompileMode mode : {CompileMode::kJit, CompileMode::kAot}) {
        orchestrator::WorkflowRequest request;
        request.cell = CellSpec{"edge", size, mode, StatePolicy::kWarmPool};
        request.run_id = "oracle-" + std::to_string(seed) + "-" +
                         std::string(payload::SizeLabelName(size)) + "-" +
                         std::string(protocol::CompileModeName(mode));
        request.seed = seed;
        request.raw = raw;
        RunRecord record = orchestrator::ExecuteWorkflow(Shared().backend(), request);
        if (record.Discarded()) return {false, request.run_id + ": " + *record.discard_reason};
        if (record.final_digest != want) {
          return {false, request.run_id + ": wasm " + record.final_digest.value_or("none") +
                             " native " + want};
        }
        ++checked;
      }
    }
  }
  return {checked == 12, std::to_string(checked) +
                             " seed/size/mode combinations match the native digest"};
}

// 4 ---------------------------------------------------------------------------
std::vector<float> NaiveProduct(const std::vector<float>& a, size_t d) {
  std::vector<float> c(d * d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      float acc = 0.0f;
      for (size_t k = 0; k < d; ++k) acc += a[i * d + k] * a[k * d + j];
      c[i * d + j] = acc;
    }
  }
  return c;
}

Outcome FanOutMatmul() {
  if (auto s = Shared().EnsureShim(); !s.ok()) return {false, std::string(s.message())};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::string detail;
  for (uint32_t d : {4u, 8u, 64u}) {
    std::vector<float> a(d * d);
    for (float& x : a) x = dist(rng);
    const std::vector<float> naive = NaiveProduct(a, d);

    // Native: four strips, then the fan-in assembly.
    std::vector<steps::MatrixBlock> blocks;
    for (uint32_t k = 0; k < 4; ++k) {
      steps::MatrixBlock strip{d, k * d / 4, (k + 1) * d / 4, {}};
      strip.values.assign(a.begin() + strip.rows_from * d, a.begin() + strip.rows_to * d);
      auto out = steps::MapBlock(strip, a);
      if (!out.ok()) return {false, "MapBlock: " + std::string(out.status().message())};
      blocks.push_back(*out);
    }
    std::shuffle(blocks.begin(), blocks.end(), rng);
    auto reduced = steps::Reduce(blocks);
    if (!reduced.ok()) return {false, "Reduce: " + std::string(reduced.status().message())};
    if (reduced->values != naive) return {false, "native assembly differs at d=" + std::to_string(d)};

    // Wasm: the four S3 branches on the matrix as S2 emits it, assembled in order.
    steps::DataFrame frame;
    frame.element_kind = steps::ElementKind::kF32;
    frame.payload = steps::FloatsToLe(a);
    const Bytes input = steps::EncodeDataFrame(frame);
    std::vector<float> assembled;
    for (int k = 0; k < 4; ++k) {
      protocol::InvokeFrame invoke{{StepKind::kS3, k}, "matmul", input};
      auto result = Shared().backend().Invoke(invoke, {CompileMode::kAot, StatePolicy::kWarmPool});
      if (!result.ok() || result->status != protocol::ResultStatus::kOk) {
        return {false, "wasm S3 failed at d=" + std::to_string(d)};
      }
      auto block = steps::DecodeMatrixBlock(result->payload);
      if (!block.ok()) return {false, "wasm S3 output: " + std::string(block.status().message())};
      assembled.insert(assembled.end(), block->values.begin(), block->values.end());
    }
    if (assembled != naive) return {false, "wasm assembly differs at d=" + std::to_string(d)};
    detail += (detail.empty() ? "d=" : ",") + std::to_string(d);
  }
  return {true, detail + " bit-exact (native and wasm)"};
}

// 5 ---------------------------------------------------------------------------
Outcome ProtocolRoundTrip() {
  std::mt19937_64 rng(5);
  constexpr size_t kMax = 4u << 20;
  const auto& ids = protocol::AllStepIds();
  int multipart = 0;
  auto random_size = [&](int i) -> size_t {
    if (i == 0) return 0;
    if (i == 1) return kMax;
    // Log-uniform over [1, 4 MiB] so every scale is covered.
    double e = std::uniform_real_distribution<double>(0.0, std::log2(double(kMax)))(rng);
    return std::min<size_t>(kMax, static_cast<size_t>(std::exp2(e)));
  };
  for (int i = 0; i < 1000; ++i) {
    Bytes payload(random_size(i));
    for (auto& b : payload) b = static_cast<uint8_t>(rng());
    protocol::InvokeFrame f{ids[rng() % ids.size()], "run-" + std::to_string(rng()),
                            std::move(payload)};
    auto single = protocol::DecodeInvokeFrame(protocol::EncodeFrame(f));
    if (!single.ok() || !(*single == f)) return {false, "single-part frame " + std::to_string(i)};
    const size_t threshold = 1 + rng() % (256u << 10);
    protocol::MultipartParts parts = protocol::SplitMultipart(f, threshold);
    multipart += parts.payload.has_value();
    std::optional<ByteSpan> part;
    if (parts.payload) part = ByteSpan(*parts.payload);
    auto joined = protocol::JoinMultipart(parts.meta, part);
    if (!joined.ok() || !(*joined == f)) return {false, "multipart frame " + std::to_string(i)};

    protocol::ResultFrame r;
    r.payload = f.payload;
    r.run_id = f.run_id;
    r.step_id = f.step_id;
    if (rng() % 2) {
      r.total_us = static_cast<int64_t>(rng() % 10000000);
      r.instance = rng() % 2 ? protocol::InstanceState::kCold : protocol::InstanceState::kWarm;
      protocol::PhaseBreakdown p;
      p.load_us = rng() % 1000;
      p.compile_us = rng() % 100000;
      p.instantiate_us = rng() % 1000;
      p.init_us = rng() % 1000;
      p.execute_us = rng() % 1000000;
      r.phase_breakdown = p;
      r.resource_samples = std::vector<protocol::ResourceSample>{
          {static_cast<int64_t>(rng() % 1000000), double(rng() % 10000) / 100.0, rng() % (1u << 30)}};
    }
    auto result = protocol::DecodeResultFrame(protocol::EncodeFrame(r));
    if (!result.ok() || !(*result == r)) return {false, "result frame " + std::to_string(i)};
  }
  return {true, "1000 invoke and result frames, 0 B to 4 MiB; " + std::to_string(multipart) +
                    " split into multipart"};
}

// 6 ---------------------------------------------------------------------------
Outcome StatisticsOracle() {
  std::mt19937_64 rng(6);
  int bootstrap_checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + rng() % 1000;
    std::vector<double> x = test::RandomSampleSet(rng, n);
    metrics::OutlierSplit split = metrics::FilterOutliers(x);
    test::OracleSplit oracle = test::OracleFilter(x);
    if (split.kept != oracle.kept || split.removed != oracle.removed) {
      return {false, "outlier split differs on set " + std::to_string(trial)};
    }
    auto a = metrics::Summarize(x);
    auto b = metrics::Summarize(x);
    if (!a.ok() || !b.ok() || !(*a == *b)) {
      return {false, "bootstrap not deterministic on set " + std::to_string(trial)};
    }
    const double median = test::OraclePercentile(oracle.kept, 0.5);
    const double p25 = test::OraclePercentile(oracle.kept, 0.25);
    const double p75 = test::OraclePercentile(oracle.kept, 0.75);
    if (a->median != median || a->p25 != p25 || a->p75 != p75 || a->iqr != p75 - p25 ||
        a->n != oracle.kept.size() || a->outliers_removed != oracle.removed.size()) {
      return {false, "summary differs on set " + std::to_string(trial)};
    }
    if (!(a->ci95_low <= a->median && a->median <= a->ci95_high)) {
      return {false, "CI excludes the median on set " + std::to_string(trial)};
    }
    if (trial % 20 == 0) {
      test::OracleSummary o =
          test::OracleSummarize(x, metrics::kDefaultBootstrapSeed, metrics::kBootstrapResamples);
      if (a->ci95_low != o.ci95_low || a->ci95_high != o.ci95_high) {
        return {false, "bootstrap CI differs from the oracle on set " + std::to_string(trial)};
      }
      ++bootstrap_checked;
    }
  }
  return {true, "500 sets exact; bootstrap deterministic; " + std::to_string(bootstrap_checked) +
                    " CIs equal the sort-based bootstrap"};
}

// 7 ---------------------------------------------------------------------------
Outcome PhaseAccounting() {
  auto records = Shared().Campaign();
  if (!records.ok()) return {false, std::string(records.status().message())};
  size_t spans = 0, warm = 0;
  std::map<std::string, int> per_cell;
  for (const RunRecord& r : **records) {
    if (r.Discarded()) return {false, r.run_id + " discarded: " + *r.discard_reason};
    ++per_cell[r.cell.Id()];
    for (const StepSpan& s : r.spans) {
      if (!s.phases || !s.executor_total_us || !s.instance) {
        return {false, r.run_id + ": span without phase breakdown"};
      }
      if (s.phases->Sum() > *s.executor_total_us + 1000) {
        return {false, r.run_id + ": phases " + std::to_string(s.phases->Sum()) + " > total " +
                           std::to_string(*s.executor_total_us) + " + 1 ms"};
      }
      if (*s.instance == protocol::InstanceState::kWarm) {
        ++warm;
        if (s.phases->compile_us != 0 || s.phases->instantiate_us != 0) {
          return {false, r.run_id + ": warm invocation with compile/instantiate"};
        }
      }
      ++spans;
    }
  }
  for (const char* cell : {"edge/small/jit/cold", "edge/small/jit/warm", "edge/small/aot/cold",
                           "edge/small/aot/warm"}) {
    if (per_cell[cell] != 20) return {false, std::string(cell) + " does not have k=20 records"};
  }
  return {warm > 0, std::to_string(spans) + " invocations (" + std::to_string(warm) +
                        " warm) within 1 ms; warm compile = instantiate = 0"};
}

// 8 ---------------------------------------------------------------------------
Outcome StartupTrends() {
  auto records = Shared().Campaign();
  if (!records.ok()) return {false, std::string(records.status().message())};
  std::map<std::string, std::vector<double>> startup;
  for (const RunRecord& r : **records) {
    if (r.cell.payload != SizeLabel::kSmall || r.Discarded()) continue;
    for (const StepSpan& s : r.spans) {
      if (s.phases) startup[r.cell.Id()].push_back(static_cast<double>(s.phases->Startup()));
    }
  }
  const double cold_jit = Median(startup["edge/small/jit/cold"]);
  const double warm_jit = Median(startup["edge/small/jit/warm"]);
  const double cold_aot = Median(startup["edge/small/aot/cold"]);
  const double warm_aot = Median(startup["edge/small/aot/warm"]);
  const bool ok = warm_jit < cold_jit && warm_aot < cold_aot && cold_aot < cold_jit;
  return {ok, Fmt("median startup us: cold jit %.0f, warm jit %.0f, cold aot %.0f, warm aot %.0f",
                  cold_jit, warm_jit, cold_aot, warm_aot)};
}

// 9 ---------------------------------------------------------------------------
Outcome ThroughputIdentity() {
  orchestrator::StubOptions options;
  options.step_delay[StepKind::kS1] = 100ms;  // the whole workflow completes in 100 ms
  orchestrator::StubBackend stub("stub", options);
  orchestrator::ThroughputConfig config;
  config.cell = CellSpec{"stub", SizeLabel::kSmall, CompileMode::kJit, StatePolicy::kWarmPool};
  config.duration = 5000ms;
  auto result = orchestrator::ThroughputRun(stub, config);
  if (!result.ok()) return {false, std::string(result.status().message())};
  const bool ok = result->failed == 0 && std::abs(result->per_second - 10.0) <= 0.2;
  return {ok, Fmt("%.3f workflows/s over %.2f s (%.0f completed)", result->per_second,
                  result->elapsed_s, static_cast<double>(result->completed))};
}

// 10 --------------------------------------------------------------------------
Outcome MakespanStructure() {
  auto records = Shared().Campaign();
  if (!records.ok()) return {false, std::string(records.status().message())};
  const auto paths = orchestrator::EnumeratePaths(orchestrator::BenchmarkDag());
  std::vector<double> makespans, span_sums, overlaps;
  for (const RunRecord& r : **records) {
    for (const auto& path : paths) {
      int64_t sum = 0;
      for (StepRef step : path) {
        const StepSpan* s = r.SpanOf(step);
        if (s == nullptr) return {false, r.run_id + ": missing span"};
        sum += s->Duration();
      }
      if (r.makespan_us < sum) {
        return {false, r.run_id + ": makespan " + std::to_string(r.makespan_us) +
                           " < path sum " + std::to_string(sum)};
      }
    }
    if (r.cell.payload != SizeLabel::kLarge) continue;
    int64_t total = 0;
    std::vector<std::pair<int64_t, int>> events;
    for (const StepSpan& s : r.spans) {
      total += s.Duration();
      if (s.step.kind == StepKind::kS3) {
        events.push_back({s.start_us, 1});
        events.push_back({s.end_us, -1});
      }
    }
    std::sort(events.begin(), events.end());
    int current = 0, peak = 0;
    for (const auto& [t, delta] : events) peak = std::max(peak, current += delta);
    makespans.push_back(static_cast<double>(r.makespan_us));
    span_sums.push_back(static_cast<double>(total));
    overlaps.push_back(peak);
  }
  if (makespans.empty()) return {false, "no large-class records"};
  const double m = Median(makespans);
  const double s = Median(span_sums);
  const double o = Median(overlaps);
  return {m < s && o == 4,
          Fmt("all records: makespan >= every path sum; large: median makespan %.0f us < median "
              "span sum %.0f us, median S3 overlap %.0f",
              m, s, o)};
}

// 11 --------------------------------------------------------------------------
Outcome RepetitionProtocol() {
  std::vector<CellSpec> cells;
  for (SizeLabel size : payload::kAllSizes) {
    cells.push_back(CellSpec{"stub", size, CompileMode::kJit, StatePolicy::kWarmPool});
  }
  cells.push_back(CellSpec{"stub", SizeLabel::kSmall, CompileMode::kAot, StatePolicy::kColdOneShot});
  const auto a = orchestrator::PlanOrder(cells, 5, 77);
  const auto b = orchestrator::PlanOrder(cells, 5, 77);
  const auto c = orchestrator::PlanOrder(cells, 5, 78);
  if (a != b || a == c) return {false, "PlanOrder is not a pure function of order_seed"};

  orchestrator::PlanConfig config;
  config.cells = cells;
  config.k = 5;
  config.warmups = 2;
  config.order_seed = 77;
  std::vector<std::vector<std::string>> logs;
  size_t invocations = 0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    orchestrator::StubBackend stub("stub");
    orchestrator::MemoryRecordSink sink;
    auto summary = orchestrator::RunPlan({{"stub", &stub}}, config, sink);
    if (!summary.ok()) return {false, std::string(summary.status().message())};
    std::vector<std::string> ids;
    for (const RunRecord& r : sink.records()) {
      if (r.run_id.find("warmup") != std::string::npos) return {false, "warm-up run was logged"};
      ids.push_back(r.run_id);
    }
    logs.push_back(ids);
    invocations = stub.invocations().size();
  }
  std::vector<std::string> planned;
  for (const auto& p : a) planned.push_back(p.run_id);
  const size_t measured_invocations = planned.size() * 8;
  const bool ok = logs[0] == logs[1] && logs[0] == planned &&
                  invocations > measured_invocations;
  return {ok, std::to_string(planned.size()) + " runs in identical seeded order twice; " +
                  std::to_string(invocations - measured_invocations) +
                  " warm-up/priming invocations kept out of the log"};
}

}  // namespace
}  // namespace wasmflow::acceptance

int main(int argc, char** argv) {
  using wasmflow::acceptance::Outcome;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  namespace a = wasmflow::acceptance;
  const std::vector<Criterion> criteria = {
      {1, "kernel sizing", a::KernelSizing},
      {2, "artifact size accounting", a::ArtifactSizeAccounting},
      {3, "wasm pipeline equals native oracle", a::OracleEquivalence},
      {4, "S3 fan-out equals naive matmul", a::FanOutMatmul},
      {5, "frame round-trip", a::ProtocolRoundTrip},
      {6, "statistics oracle", a::StatisticsOracle},
      {7, "phase accounting", a::PhaseAccounting},
      {8, "startup ordering", a::StartupTrends},
      {9, "closed-loop throughput identity", a::ThroughputIdentity},
      {10, "makespan structure", a::MakespanStructure},
      {11, "repetition protocol", a::RepetitionProtocol},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}
