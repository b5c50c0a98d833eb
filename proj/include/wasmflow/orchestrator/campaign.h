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

// Repeated-measurement campaigns over a grid of cells, and closed-loop
// throughput runs.

#ifndef WASMFLOW_ORCHESTRATOR_CAMPAIGN_H_
#define WASMFLOW_ORCHESTRATOR_CAMPAIGN_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/orchestrator/backend.h"
#include "wasmflow/orchestrator/record.h"
#include "wasmflow/orchestrator/workflow.h"

namespace wasmflow::orchestrator {

struct PlannedRun {
  CellSpec cell;
  int repetition = 0;  // 0-based
  std::string run_id;
  friend bool operator==(const PlannedRun&, const PlannedRun&) = default;
};

// The k repetitions of every cell, in a uniformly random order that is a pure
// function of `order_seed`. Run ids are derived from the same seed.
std::vector<PlannedRun> PlanOrder(const std::vector<CellSpec>& cells, int k, uint64_t order_seed);

struct PlanConfig {
  std::vector<CellSpec> cells;
  int k = 20;
  // Unlogged runs per cell before the first measured run.
  int warmups = 3;
  uint64_t order_seed = 1;
  uint64_t payload_seed = payload::kDefaultSeed;
  WorkflowOptions workflow;
};

struct PlanSummary {
  int executed = 0;  // logged records
  int discarded = 0;
  int verification_failures = 0;
  std::vector<std::string> unavailable_envs;
};

// Executes warm-ups, then every planned run in PlanOrder order, appending one
// record per measured run to `sink`. Cold cells reset the pool before each
// run; warm cells are re-primed (unlogged) after any reset of their
// environment. An environment that fails its health check yields discarded
// records for all of its runs. Fails only on unknown environments or sink
// errors.
absl::StatusOr<PlanSummary> RunPlan(const BackendMap& backends, const PlanConfig& config,
                                    RecordSink& sink);

// Final digest the workflow must produce for (seed, size): the committed
// golden value when there is one, else the native pipeline's.
absl::StatusOr<Digest256> OracleDigest(uint64_t seed, payload::SizeLabel size);

struct ThroughputConfig {
  CellSpec cell;
  std::chrono::milliseconds duration{10000};
  int concurrency = 1;  // closed-loop clients
  uint64_t payload_seed = payload::kDefaultSeed;
  WorkflowOptions workflow;
};

struct ThroughputResult {
  CellSpec cell;
  int concurrency = 1;
  int64_t completed = 0;  // successful, verified workflows
  int64_t failed = 0;
  double elapsed_s = 0.0;  // first dispatch to last completion
  double per_second = 0.0;  // completed / elapsed_s
};

// Each client starts a new workflow as soon as its previous one completes,
// until `duration` has passed. The cell must be warm; one unmeasured
// workflow primes the backend first.
absl::StatusOr<ThroughputResult> ThroughputRun(Backend& backend, const ThroughputConfig& config);

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_CAMPAIGN_H_
