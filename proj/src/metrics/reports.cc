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

#include "wasmflow/metrics/reports.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <variant>

#include "json.hpp"
#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"
#include "wasmflow/orchestrator/dag.h"

namespace wasmflow::metrics {
namespace {

using Json = nlohmann::ordered_json;
using orchestrator::CellSpec;
using orchestrator::RunRecord;
using orchestrator::StepSpan;
using protocol::StepKind;
using protocol::StepRef;

using Value = std::variant<std::string, int64_t, double>;

struct Table {
  std::string file;
  std::string unit;  // empty when the table mixes units
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  std::vector<Json> row_extras;  // per row, merged into the JSON form only
};

constexpr StepKind kKinds[] = {StepKind::kS1, StepKind::kS2, StepKind::kS3, StepKind::kS4,
                               StepKind::kS5};

const std::vector<std::string> kCellColumns = {"env", "payload", "mode", "state"};
const std::vector<std::string> kStatsColumns = {
    "n",         "median",    "p25",         "p75",         "iqr",
    "ci95_low",  "ci95_high", "outliers_removed", "whisker_low", "whisker_high"};

std::string KindName(StepKind kind) { return protocol::StepKindName(kind); }

std::vector<std::string> Concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Value> CellValues(const CellSpec& cell) {
  return {cell.env, std::string(payload::SizeLabelName(cell.payload)),
          std::string(protocol::CompileModeName(cell.mode)),
          std::string(protocol::StatePolicyName(cell.state))};
}

// Appends the summary columns for `samples`; returns the JSON extras
// (the post-filter samples, for plotting).
Json AppendStats(std::vector<Value>& row, const std::vector<double>& samples, uint64_t seed) {
  auto summary = Summarize(samples, seed);
  OutlierSplit split = FilterOutliers(samples);
  const auto [lo, hi] = std::minmax_element(split.kept.begin(), split.kept.end());
  row.push_back(static_cast<int64_t>(summary->n));
  row.push_back(summary->median);
  row.push_back(summary->p25);
  row.push_back(summary->p75);
  row.push_back(summary->iqr);
  row.push_back(summary->ci95_low);
  row.push_back(summary->ci95_high);
  row.push_back(static_cast<int64_t>(summary->outliers_removed));
  row.push_back(*lo);
  row.push_back(*hi);
  return Json{{"samples", split.kept}, {"outliers", split.removed}};
}

std::string FormatValue(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string quoted = "\"";
    for (char c : *s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  if (const auto* i = std::get_if<int64_t>(&v)) return std::to_string(*i);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", std::get<double>(v));
  return buf;
}

Json ValueJson(const Value& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

struct Footer {
  size_t used = 0;
  size_t discarded = 0;
  size_t verification_failed = 0;
  std::vector<std::string> incomplete;
};

std::string RenderCsv(const Table& table, const ReportContext& context, const Footer& footer) {
  std::string out = "# wasmflow report: " + table.file + "\n";
  for (const auto& [key, value] : context.provenance) out += "# " + key + ": " + value + "\n";
  if (!table.unit.empty()) out += "# unit: " + table.unit + "\n";
  for (size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + FormatValue(row[i]);
    out += "\n";
  }
  out += "# used_records: " + std::to_string(footer.used) + "\n";
  out += "# discarded_records: " + std::to_string(footer.discarded) + "\n";
  out += "# verification_failed_records: " + std::to_string(footer.verification_failed) + "\n";
  std::string incomplete;
  for (const std::string& c : footer.incomplete) incomplete += (incomplete.empty() ? "" : ";") + c;
  out += "# incomplete_cells: " + (incomplete.empty() ? std::string("none") : incomplete) + "\n";
  return out;
}

Json TableJson(const Table& table) {
  Json rows = Json::array();
  for (size_t r = 0; r < table.rows.size(); ++r) {
    Json row = Json::object();
    for (size_t i = 0; i < table.columns.size(); ++i) row[table.columns[i]] = ValueJson(table.rows[r][i]);
    if (r < table.row_extras.size()) {
      for (auto& [k, v] : table.row_extras[r].items()) row[k] = v;
    }
    rows.push_back(std::move(row));
  }
  Json j = {{"unit", table.unit}, {"rows", std::move(rows)}};
  return j;
}

// Largest number of S3 branches running at one instant.
int64_t MaxS3Overlap(const RunRecord& record) {
  std::vector<std::pair<int64_t, int>> events;
  for (const StepSpan& s : record.spans) {
    if (s.step.kind != StepKind::kS3) continue;
    events.push_back({s.start_us, +1});
    events.push_back({s.end_us, -1});
  }
  std::sort(events.begin(), events.end());  // ends sort before starts at ties
  int64_t current = 0;
  int64_t best = 0;
  for (const auto& [t, delta] : events) {
    current += delta;
    best = std::max(best, current);
  }
  return best;
}

Table StartupTable(const std::map<std::string, std::vector<const RunRecord*>>& cells,
                   uint64_t seed) {
  Table t{"startup.csv", "microseconds",
          Concat({kCellColumns, {"step", "phase"}, kStatsColumns}), {}, {}};
  using PhaseGetter = int64_t (*)(const protocol::PhaseBreakdown&);
  const std::pair<const char*, PhaseGetter> phases[] = {
      {"load", [](const protocol::PhaseBreakdown& p) { return p.load_us; }},
      {"compile", [](const protocol::PhaseBreakdown& p) { return p.compile_us; }},
      {"instantiate", [](const protocol::PhaseBreakdown& p) { return p.instantiate_us; }},
      {"init", [](const protocol::PhaseBreakdown& p) { return p.init_us; }},
      {"startup", [](const protocol::PhaseBreakdown& p) { return p.Startup(); }},
  };
  for (const auto& [id, records] : cells) {
    for (StepKind kind : kKinds) {
      for (const auto& [phase, get] : phases) {
        std::vector<double> samples;
        for (const RunRecord* r : records) {
          for (const StepSpan& s : r->spans) {
            if (s.step.kind == kind && s.phases) samples.push_back(static_cast<double>(get(*s.phases)));
          }
        }
        if (samples.empty()) continue;
        std::vector<Value> row = CellValues(records.front()->cell);
        row.push_back(KindName(kind));
        row.push_back(std::string(phase));
        t.row_extras.push_back(AppendStats(row, samples, seed));
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

Table StepLatencyTable(const std::map<std::string, std::vector<const RunRecord*>>& cells,
                       uint64_t seed) {
  Table t{"step_latency.csv", "microseconds", Concat({kCellColumns, {"step"}, kStatsColumns}),
          {}, {}};
  // Pooled rows per step kind, with per-branch S3 rows after the pooled one.
  std::vector<std::pair<std::string, std::function<bool(StepRef)>>> groups;
  for (StepKind kind : kKinds) {
    groups.push_back({KindName(kind), [kind](StepRef s) { return s.kind == kind; }});
    if (kind == StepKind::kS3) {
      for (int b = 0; b < orchestrator::BenchmarkDag().fan_out; ++b) {
        StepRef ref{StepKind::kS3, b};
        groups.push_back({protocol::StepIdName(ref), [ref](StepRef s) { return s == ref; }});
      }
    }
  }
  for (const auto& [id, records] : cells) {
    for (const auto& [name, match] : groups) {
      std::vector<double> samples;
      for (const RunRecord* r : records) {
        for (const StepSpan& s : r->spans) {
          if (match(s.step)) samples.push_back(static_cast<double>(s.Duration()));
        }
      }
      if (samples.empty()) continue;
      std::vector<Value> row = CellValues(records.front()->cell);
      row.push_back(name);
      t.row_extras.push_back(AppendStats(row, samples, seed));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table MakespanTable(const std::map<std::string, std::vector<const RunRecord*>>& cells,
                    uint64_t seed) {
  Table t{"makespan.csv", "microseconds",
          Concat({kCellColumns, kStatsColumns,
                  {"span_sum_median", "critical_path_median", "s3_max_overlap_median"}}),
          {}, {}};
  const auto paths = orchestrator::EnumeratePaths(orchestrator::BenchmarkDag());
  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return PercentileSorted(v, 0.5);
  };
  for (const auto& [id, records] : cells) {
    std::vector<double> makespans, span_sums, critical, overlap;
    for (const RunRecord* r : records) {
      makespans.push_back(static_cast<double>(r->makespan_us));
      int64_t sum = 0;
      for (const StepSpan& s : r->spans) sum += s.Duration();
      span_sums.push_back(static_cast<double>(sum));
      int64_t longest = 0;
      for (const auto& path : paths) {
        int64_t path_sum = 0;
        for (StepRef step : path) {
          if (const StepSpan* s = r->SpanOf(step)) path_sum += s->Duration();
        }
        longest = std::max(longest, path_sum);
      }
      critical.push_back(static_cast<double>(longest));
      overlap.push_back(static_cast<double>(MaxS3Overlap(*r)));
    }
    std::vector<Value> row = CellValues(records.front()->cell);
    t.row_extras.push_back(AppendStats(row, makespans, seed));
    row.push_back(median_of(span_sums));
    row.push_back(median_of(critical));
    row.push_back(median_of(overlap));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table ThroughputTable(const ReportContext& context) {
  Table t{"throughput.csv", "",
          Concat({kCellColumns,
                  {"concurrency", "completed", "failed", "elapsed_s", "workflows_per_s"}}),
          {}, {}};
  std::vector<orchestrator::ThroughputResult> sorted = context.throughput;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.cell.Id(), a.concurrency) < std::make_pair(b.cell.Id(), b.concurrency);
  });
  for (const auto& r : sorted) {
    std::vector<Value> row = CellValues(r.cell);
    row.push_back(static_cast<int64_t>(r.concurrency));
    row.push_back(r.completed);
    row.push_back(r.failed);
    row.push_back(r.elapsed_s);
    row.push_back(r.per_second);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table ResourcesTable(const std::map<std::string, std::vector<const RunRecord*>>& cells) {
  Table t{"resources.csv", "",
          Concat({kCellColumns,
                  {"step", "spans", "samples", "best_effort_spans", "cpu_pct_mean", "cpu_pct_peak",
                   "rss_bytes_mean", "rss_bytes_peak"}}),
          {}, {}};
  for (const auto& [id, records] : cells) {
    for (StepKind kind : kKinds) {
      int64_t spans = 0, best_effort = 0, count = 0;
      double cpu_sum = 0, cpu_peak = 0, rss_sum = 0;
      int64_t rss_peak = 0;
      for (const RunRecord* r : records) {
        for (const StepSpan& s : r->spans) {
          if (s.step.kind != kind) continue;
          ++spans;
          best_effort += s.resource_best_effort;
          for (const auto& sample : s.resource_samples) {
            ++count;
            cpu_sum += sample.cpu_pct;
            cpu_peak = std::max(cpu_peak, sample.cpu_pct);
            rss_sum += static_cast<double>(sample.rss_bytes);
            rss_peak = std::max<int64_t>(rss_peak, sample.rss_bytes);
          }
        }
      }
      if (spans == 0) continue;
      std::vector<Value> row = CellValues(records.front()->cell);
      row.push_back(KindName(kind));
      row.push_back(spans);
      row.push_back(count);
      row.push_back(best_effort);
      row.push_back(count ? cpu_sum / count : 0.0);
      row.push_back(cpu_peak);
      row.push_back(count ? rss_sum / count : 0.0);
      row.push_back(rss_peak);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

std::string FormatMb(uint64_t bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", static_cast<double>(bytes) / 1e6);
  return buf;
}

Table ArtifactSizesTable(const ReportContext& context) {
  Table t{"artifact_sizes.csv", "",
          {"env", "step", "wasm_bytes", "aot_bytes", "wasm_mb", "aot_mb", "increase_pct"},
          {},
          {}};
  for (const auto& [env, rows] : context.artifact_sizes) {
    for (const ArtifactSizeRow& r : rows) {
      std::string pct = (r.pct_increase >= 0 ? "+" : "") + std::to_string(r.pct_increase);
      t.rows.push_back({env, r.step, static_cast<int64_t>(r.wasm_bytes),
                        static_cast<int64_t>(r.aot_bytes), FormatMb(r.wasm_bytes),
                        FormatMb(r.aot_bytes), pct});
    }
  }
  return t;
}

absl::Status Malformed(std::string_view detail) {
  return absl::InvalidArgumentError("invalid report context: " + std::string(detail));
}

}  // namespace

const ReportFile* ReportBundle::Find(std::string_view name) const {
  for (const ReportFile& f : files) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string ReportContextToJson(const ReportContext& context) {
  Json provenance = Json::object();
  for (const auto& [k, v] : context.provenance) provenance[k] = v;
  Json throughput = Json::array();
  for (const auto& r : context.throughput) {
    throughput.push_back({{"cell", r.cell.Id()},
                          {"concurrency", r.concurrency},
                          {"completed", r.completed},
                          {"failed", r.failed},
                          {"elapsed_s", r.elapsed_s},
                          {"per_second", r.per_second}});
  }
  Json sizes = Json::object();
  for (const auto& [env, rows] : context.artifact_sizes) {
    Json list = Json::array();
    for (const ArtifactSizeRow& r : rows) {
      list.push_back({{"step", r.step},
                      {"wasm_bytes", r.wasm_bytes},
                      {"aot_bytes", r.aot_bytes},
                      {"pct_increase", r.pct_increase}});
    }
    sizes[env] = std::move(list);
  }
  Json j = {{"provenance", std::move(provenance)},
            {"expected_k", context.expected_k},
            {"bootstrap_seed", context.bootstrap_seed},
            {"throughput", std::move(throughput)},
            {"artifact_sizes", std::move(sizes)}};
  return j.dump(2) + "\n";
}

absl::StatusOr<ReportContext> ReportContextFromJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return Malformed("not a JSON object");
  try {
    ReportContext context;
    // value() returns by copy; keep each copy alive while iterating it.
    const Json provenance = j.value("provenance", Json::object());
    const Json throughput = j.value("throughput", Json::array());
    const Json sizes = j.value("artifact_sizes", Json::object());
    for (const auto& [k, v] : provenance.items()) {
      context.provenance.emplace_back(k, v.get<std::string>());
    }
    context.expected_k = j.value("expected_k", 0);
    context.bootstrap_seed = j.value("bootstrap_seed", kDefaultBootstrapSeed);
    for (const Json& r : throughput) {
      auto cell = orchestrator::ParseCellId(r.at("cell").get<std::string>());
      if (!cell.ok()) return Malformed("bad throughput cell");
      orchestrator::ThroughputResult result;
      result.cell = *cell;
      result.concurrency = r.at("concurrency").get<int>();
      result.completed = r.at("completed").get<int64_t>();
      result.failed = r.at("failed").get<int64_t>();
      result.elapsed_s = r.at("elapsed_s").get<double>();
      result.per_second = r.at("per_second").get<double>();
      context.throughput.push_back(result);
    }
    for (const auto& [env, rows] : sizes.items()) {
      for (const Json& r : rows) {
        context.artifact_sizes[env].push_back(ArtifactSizeRow{
            r.at("step").get<std::string>(), r.at("wasm_bytes").get<uint64_t>(),
            r.at("aot_bytes").get<uint64_t>(), r.at("pct_increase").get<int64_t>()});
      }
    }
    return context;
  } catch (const Json::exception& e) {
    // The JSON library reports type and key errors by exception.
    return Malformed(e.what());
  }
}

absl::StatusOr<ReportBundle> BuildReports(std::span<const RunRecord> records,
                                          const ReportContext& context) {
  if (records.empty() && context.throughput.empty() && context.artifact_sizes.empty()) {
    return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kEmptyInput,
                     "no records, throughput results or artifact sizes to report");
  }
  ReportBundle bundle;
  Footer footer;
  std::map<std::string, std::vector<const RunRecord*>> cells;
  std::map<std::string, size_t> seen_per_cell;
  int inferred_k = 0;
  for (const RunRecord& r : records) {
    seen_per_cell[r.cell.Id()];
    inferred_k = std::max(inferred_k, r.repetition + 1);
    if (r.Discarded()) {
      ++footer.discarded;
    } else if (r.verification == orchestrator::Verification::kFail) {
      ++footer.verification_failed;
    } else {
      ++footer.used;
      cells[r.cell.Id()].push_back(&r);
    }
  }
  const size_t expected = context.expected_k > 0 ? context.expected_k : inferred_k;
  for (const auto& [id, unused] : seen_per_cell) {
    auto it = cells.find(id);
    if (it == cells.end() || it->second.size() < expected) footer.incomplete.push_back(id);
  }
  const uint64_t seed = context.bootstrap_seed;

  std::vector<Table> tables;
  tables.push_back(StartupTable(cells, seed));
  tables.push_back(StepLatencyTable(cells, seed));
  tables.push_back(MakespanTable(cells, seed));
  tables.push_back(ThroughputTable(context));
  tables.push_back(ResourcesTable(cells));
  tables.push_back(ArtifactSizesTable(context));

  Json provenance = Json::object();
  for (const auto& [k, v] : context.provenance) provenance[k] = v;
  Json summary = Json::object();
  summary["records"] = records.size();
  summary["used_records"] = footer.used;
  summary["discarded_records"] = footer.discarded;
  summary["verification_failed_records"] = footer.verification_failed;
  summary["expected_k"] = expected;
  summary["incomplete_cells"] = footer.incomplete;
  summary["bootstrap_seed"] = seed;
  summary["bootstrap_resamples"] = kBootstrapResamples;
  Json report = Json::object();
  report["provenance"] = std::move(provenance);
  report["summary"] = std::move(summary);
  for (const Table& t : tables) {
    bundle.files.push_back(ReportFile{t.file, RenderCsv(t, context, footer)});
    std::string key = t.file.substr(0, t.file.find('.'));
    report[key] = TableJson(t);
  }
  bundle.files.push_back(ReportFile{"report.json", report.dump(2) + "\n"});
  bundle.incomplete_cells = footer.incomplete;
  bundle.used_records = footer.used;
  bundle.discarded_records = footer.discarded;
  bundle.verification_failed_records = footer.verification_failed;
  return bundle;
}

absl::Status WriteReports(const ReportBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return absl::UnavailableError("cannot create " + out_dir.string() + ": " + ec.message());
  for (const ReportFile& f : bundle.files) {
    if (absl::Status s = WriteFileText((out_dir / f.name).string(), f.content); !s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace wasmflow::metrics
