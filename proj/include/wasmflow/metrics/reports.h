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

// Report generation from a record log: plot-ready CSV tables and one JSON
// bundle. Output is a pure function of the inputs.

#ifndef WASMFLOW_METRICS_REPORTS_H_
#define WASMFLOW_METRICS_REPORTS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/metrics/stats.h"
#include "wasmflow/orchestrator/campaign.h"
#include "wasmflow/orchestrator/record.h"

namespace wasmflow::metrics {

struct ArtifactSizeRow {
  std::string step;  // "S1".."S5"
  uint64_t wasm_bytes = 0;
  uint64_t aot_bytes = 0;
  int64_t pct_increase = 0;
  friend bool operator==(const ArtifactSizeRow&, const ArtifactSizeRow&) = default;
};

// Everything besides the records that a report needs; written next to the
// record log by the campaign driver.
struct ReportContext {
  // Ordered key/value pairs copied into every output file (lockfile digest,
  // config hash, seeds, ...).
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<orchestrator::ThroughputResult> throughput;
  std::map<std::string, std::vector<ArtifactSizeRow>> artifact_sizes;  // by environment
  // Measured runs each cell should have; 0 infers it from the largest
  // repetition index in the log.
  int expected_k = 0;
  uint64_t bootstrap_seed = kDefaultBootstrapSeed;
};

std::string ReportContextToJson(const ReportContext& context);
absl::StatusOr<ReportContext> ReportContextFromJson(std::string_view json);

struct ReportFile {
  std::string name;  // relative file name
  std::string content;
};

struct ReportBundle {
  // startup.csv, step_latency.csv, makespan.csv, throughput.csv,
  // resources.csv, artifact_sizes.csv, report.json.
  std::vector<ReportFile> files;
  std::vector<std::string> incomplete_cells;
  size_t used_records = 0;
  size_t discarded_records = 0;
  size_t verification_failed_records = 0;

  const ReportFile* Find(std::string_view name) const;
};

// Discarded and verification-failed runs are excluded from every statistic
// and counted in each file's footer. Cells with fewer usable runs than
// expected are listed in `incomplete_cells` and still reported. EmptyInput
// when there is nothing to report.
absl::StatusOr<ReportBundle> BuildReports(std::span<const orchestrator::RunRecord> records,
                                          const ReportContext& context);

absl::Status WriteReports(const ReportBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace wasmflow::metrics

#endif  // WASMFLOW_METRICS_REPORTS_H_
