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

#include "wasmflow/orchestrator/dag.h"

#include <algorithm>
#include <functional>
#include <optional>

#include "wasmflow/kernels/wire.h"

namespace wasmflow::orchestrator {
namespace {

std::optional<size_t> IndexOf(const DagSpec& dag, StepRef step) {
  auto it = std::find(dag.steps.begin(), dag.steps.end(), step);
  if (it == dag.steps.end()) return std::nullopt;
  return static_cast<size_t>(it - dag.steps.begin());
}

DagSpec MakeBenchmarkDag() {
  const StepRef s1{StepKind::kS1, -1}, s2{StepKind::kS2, -1}, s4{StepKind::kS4, -1},
      s5{StepKind::kS5, -1};
  DagSpec dag;
  dag.fan_out = kernels::wire::kFanOut;
  dag.fan_in = kernels::wire::kFanOut;
  dag.steps = {s1, s2};
  dag.edges = {{s1, s2}};
  for (int k = 0; k < dag.fan_out; ++k) {
    StepRef branch{StepKind::kS3, k};
    dag.steps.push_back(branch);
    dag.edges.push_back({s2, branch});
    dag.edges.push_back({branch, s4});
  }
  dag.steps.push_back(s4);
  dag.steps.push_back(s5);
  dag.edges.push_back({s4, s5});
  return dag;
}

}  // namespace

const DagSpec& BenchmarkDag() {
  static const DagSpec dag = MakeBenchmarkDag();
  return dag;
}

absl::Status ValidateDag(const DagSpec& dag) {
  if (dag.steps.empty()) return absl::InvalidArgumentError("DAG has no steps");
  if (dag.fan_out < 1 || dag.fan_in < 1) {
    return absl::InvalidArgumentError("fan_out and fan_in must be positive");
  }
  for (size_t i = 0; i < dag.steps.size(); ++i) {
    if (std::find(dag.steps.begin() + i + 1, dag.steps.end(), dag.steps[i]) != dag.steps.end()) {
      return absl::InvalidArgumentError("duplicate step " + protocol::StepIdName(dag.steps[i]));
    }
  }
  for (const DagEdge& e : dag.edges) {
    auto from = IndexOf(dag, e.from);
    auto to = IndexOf(dag, e.to);
    if (!from || !to) return absl::InvalidArgumentError("edge references an undeclared step");
    // With steps in topological order every edge points forward, which also
    // rules out cycles.
    if (*from >= *to) {
      return absl::InvalidArgumentError("edge " + protocol::StepIdName(e.from) + " -> " +
                                        protocol::StepIdName(e.to) +
                                        " breaks topological order (cycle or misordered steps)");
    }
  }
  return absl::OkStatus();
}

std::vector<StepRef> PredecessorsOf(const DagSpec& dag, StepRef step) {
  std::vector<StepRef> preds;
  for (const DagEdge& e : dag.edges) {
    if (e.to == step) preds.push_back(e.from);
  }
  return preds;
}

std::vector<std::vector<StepRef>> EnumeratePaths(const DagSpec& dag) {
  std::vector<std::vector<StepRef>> paths;
  std::vector<StepRef> current;
  auto successors = [&](StepRef step) {
    std::vector<StepRef> out;
    for (StepRef s : dag.steps) {
      for (const DagEdge& e : dag.edges) {
        if (e.from == step && e.to == s) out.push_back(s);
      }
    }
    return out;
  };
  std::function<void(StepRef)> walk = [&](StepRef step) {
    current.push_back(step);
    std::vector<StepRef> next = successors(step);
    if (next.empty()) paths.push_back(current);
    for (StepRef s : next) walk(s);
    current.pop_back();
  };
  for (StepRef s : dag.steps) {
    if (PredecessorsOf(dag, s).empty()) walk(s);
  }
  return paths;
}

}  // namespace wasmflow::orchestrator
