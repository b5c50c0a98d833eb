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

// One end-to-end execution of the benchmark DAG against a backend.

#ifndef WASMFLOW_ORCHESTRATOR_WORKFLOW_H_
#define WASMFLOW_ORCHESTRATOR_WORKFLOW_H_

#include <optional>
#include <string>

#include "wasmflow/common/util.h"
#include "wasmflow/orchestrator/backend.h"
#include "wasmflow/orchestrator/dag.h"
#include "wasmflow/orchestrator/record.h"

namespace wasmflow::orchestrator {

struct WorkflowRequest {
  CellSpec cell;
  std::string run_id;
  int repetition = 0;
  uint64_t seed = payload::kDefaultSeed;
  ByteSpan raw;  // generated payload bytes; must outlive the call
  // Oracle final digest. When set, S5 checks it and the record is verified;
  // otherwise verification is skipped.
  std::optional<Digest256> expected;
};

struct WorkflowOptions {
  // Upper bound on simultaneously dispatched steps (the fan-out width).
  int max_in_flight = 4;
};

// Dispatches each step as soon as all of its predecessors have completed. The
// S4 dispatch waits for every S3 branch (the fan-in barrier).
//
// Never fails: a transport or step failure yields a record with
// `discard_reason` set and the spans completed so far; a final digest that
// disagrees with `expected` yields verification = fail.
RunRecord ExecuteWorkflow(Backend& backend, const WorkflowRequest& request,
                          const WorkflowOptions& options = {});

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_WORKFLOW_H_
