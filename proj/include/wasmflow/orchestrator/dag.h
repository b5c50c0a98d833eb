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

// Workflow DAG description and structural queries.

#ifndef WASMFLOW_ORCHESTRATOR_DAG_H_
#define WASMFLOW_ORCHESTRATOR_DAG_H_

#include <vector>

#include "absl/status/status.h"
#include "wasmflow/protocol/frames.h"

namespace wasmflow::orchestrator {

using protocol::StepKind;
using protocol::StepRef;

struct DagEdge {
  StepRef from;
  StepRef to;
};

struct DagSpec {
  std::vector<StepRef> steps;  // in a topological order
  std::vector<DagEdge> edges;
  int fan_out = 1;
  int fan_in = 1;
};

// S1 → S2 → {S3[0..3]} → S4 → S5.
const DagSpec& BenchmarkDag();

// Steps unique, edges between declared steps, acyclic, and `steps` listed in a
// topological order.
absl::Status ValidateDag(const DagSpec& dag);

std::vector<StepRef> PredecessorsOf(const DagSpec& dag, StepRef step);

// Every source-to-sink path, in lexicographic order of step positions.
std::vector<std::vector<StepRef>> EnumeratePaths(const DagSpec& dag);

}  // namespace wasmflow::orchestrator

#endif  // WASMFLOW_ORCHESTRATOR_DAG_H_
