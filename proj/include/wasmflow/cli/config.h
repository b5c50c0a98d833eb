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

// Campaign configuration: a declarative JSON file, with command-line flags
// overriding file values.

#ifndef WASMFLOW_CLI_CONFIG_H_
#define WASMFLOW_CLI_CONFIG_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/orchestrator/backend.h"
#include "wasmflow/orchestrator/campaign.h"

namespace wasmflow::cli {

inline constexpr char kRecordLogName[] = "runs.jsonl";
inline constexpr char kRecordMetaName[] = "runs.meta.json";
inline constexpr double kDefaultMaxDiscardRatio = 0.05;

struct ThroughputPlan {
  std::vector<orchestrator::CellSpec> cells;
  std::chrono::milliseconds duration{10000};
  int concurrency = 1;
};

struct CampaignConfig {
  orchestrator::PlanConfig plan;
  std::map<std::string, orchestrator::EndpointConfig> environments;
  std::string lockfile;  // optional; its digest goes into every report
  std::string out_dir = "results";
  // A campaign whose discarded-run share exceeds this fails with exit code 2.
  double max_discard_ratio = kDefaultMaxDiscardRatio;
  std::optional<ThroughputPlan> throughput;
};

// Command-line values that replace the corresponding config entries. A cell
// dimension override (env, payload, mode, state) is applied to every cell;
// cells that become identical are merged.
struct ConfigOverrides {
  std::optional<uint64_t> seed;
  std::optional<int> k;
  std::optional<std::string> env;
  std::optional<payload::SizeLabel> payload;
  std::optional<protocol::CompileMode> mode;
  std::optional<protocol::StatePolicy> state;
  std::optional<std::string> out_dir;
};

// Parses the JSON config. InvalidArgument naming the offending entry when
// the file is malformed or a cell's environment has no endpoint.
absl::StatusOr<CampaignConfig> ParseCampaignConfig(std::string_view json);
absl::StatusOr<CampaignConfig> LoadCampaignConfig(const std::string& path);

// Applies `overrides` and re-validates.
absl::Status ApplyOverrides(const ConfigOverrides& overrides, CampaignConfig& config);

// Canonical JSON of the effective configuration (after overrides); stable
// across runs, so its digest identifies the campaign.
std::string EffectiveConfigJson(const CampaignConfig& config);
std::string ConfigHash(const CampaignConfig& config);  // BLAKE3 hex

}  // namespace wasmflow::cli

#endif  // WASMFLOW_CLI_CONFIG_H_
