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

#include "wasmflow/orchestrator/workflow.h"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "wasmflow/common/errors.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::orchestrator {
namespace {

struct Completion {
  size_t index = 0;
  int64_t start_us = 0;
  int64_t end_us = 0;
  absl::StatusOr<ResultFrame> result;
};

// Builds the payload of `step` from its predecessors' outputs (in DAG order).
absl::StatusOr<Bytes> ComposeInput(StepRef step, const std::vector<const Bytes*>& inputs,
                                   const WorkflowRequest& request) {
  switch (step.kind) {
    case StepKind::kS1:
      return steps::MakeIngestInput(request.raw);
    case StepKind::kS2:
    case StepKind::kS3:
      if (inputs.size() != 1) break;
      return *inputs[0];
    case StepKind::kS4: {
      std::vector<Bytes> blocks;
      blocks.reserve(inputs.size());
      for (const Bytes* b : inputs) blocks.push_back(*b);
      return steps::MakeReduceInput(blocks);
    }
    case StepKind::kS5:
      if (inputs.size() != 1) break;
      return steps::MakeFinalizeInput(*inputs[0], request.expected);
  }
  return absl::InternalError("unexpected predecessors for " + protocol::StepIdName(step));
}

std::string DescribeStatus(const absl::Status& status) {
  return std::string(status.message().data(), status.message().size());
}

}  // namespace

RunRecord ExecuteWorkflow(Backend& backend, const WorkflowRequest& request,
                          const WorkflowOptions& options) {
  const DagSpec& dag = BenchmarkDag();
  const size_t n = dag.steps.size();
  const InvocationSettings settings{request.cell.mode, request.cell.state};
  const int max_in_flight = std::max(1, options.max_in_flight);

  RunRecord record;
  record.run_id = request.run_id;
  record.cell = request.cell;
  record.repetition = request.repetition;
  record.seed = request.seed;

  std::vector<std::vector<size_t>> preds(n);
  for (size_t i = 0; i < n; ++i) {
    for (StepRef p : PredecessorsOf(dag, dag.steps[i])) {
      preds[i].push_back(std::find(dag.steps.begin(), dag.steps.end(), p) - dag.steps.begin());
    }
  }

  std::vector<std::optional<Bytes>> outputs(n);
  std::vector<bool> dispatched(n, false);
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Completion> done;  // guarded by mu
  std::vector<std::thread> workers;
  int in_flight = 0;
  std::optional<std::string> failure;
  bool verification_failed = false;

  auto ready = [&](size_t i) {
    return std::all_of(preds[i].begin(), preds[i].end(),
                       [&](size_t p) { return outputs[p].has_value(); });
  };

  while (true) {
    for (size_t i = 0; i < n && !failure && in_flight < max_in_flight; ++i) {
      if (dispatched[i] || !ready(i)) continue;
      std::vector<const Bytes*> inputs;
      for (size_t p : preds[i]) inputs.push_back(&*outputs[p]);
      auto input = ComposeInput(dag.steps[i], inputs, request);
      if (!input.ok()) {
        failure = std::string(error_kind::kStepFailed) + ": " + protocol::StepIdName(dag.steps[i]) +
                  ": " + DescribeStatus(input.status());
        break;
      }
      dispatched[i] = true;
      ++in_flight;
      InvokeFrame frame{dag.steps[i], request.run_id, *std::move(input)};
      const int64_t start_us = MonotonicMicros();
      workers.emplace_back([&, i, start_us, frame = std::move(frame)] {
        absl::StatusOr<ResultFrame> result = backend.Invoke(frame, settings);
        const int64_t end_us = MonotonicMicros();
        std::lock_guard<std::mutex> lock(mu);
        done.push_back(Completion{i, start_us, end_us, std::move(result)});
        cv.notify_one();
      });
    }
    if (in_flight == 0) break;

    Completion c;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return !done.empty(); });
      c = std::move(done.front());
      done.pop_front();
    }
    --in_flight;
    const StepRef step = dag.steps[c.index];
    StepSpan span;
    span.step = step;
    span.start_us = c.start_us;
    span.end_us = c.end_us;
    if (!c.result.ok()) {
      record.spans.push_back(std::move(span));
      if (!failure) failure = DescribeStatus(c.result.status());
      continue;
    }
    ResultFrame& result = *c.result;
    span.phases = result.phase_breakdown;
    span.instance = result.instance;
    span.executor_total_us = result.total_us;
    if (result.resource_samples) span.resource_samples = std::move(*result.resource_samples);
    span.resource_best_effort = result.resource_best_effort;
    record.spans.push_back(std::move(span));

    absl::Status step_status = protocol::ResultStatusOf(result);
    if (!step_status.ok()) {
      if (step.kind == StepKind::kS5 && request.expected &&
          HasErrorKind(step_status, error_kind::kDigestMismatch)) {
        verification_failed = true;
      } else if (!failure) {
        failure = std::string(error_kind::kStepFailed) + ": " + protocol::StepIdName(step) + ": " +
                  DescribeStatus(step_status);
      }
      continue;
    }
    outputs[c.index] = std::move(result.payload);
  }
  for (std::thread& t : workers) t.join();

  std::stable_sort(record.spans.begin(), record.spans.end(),
                   [](const StepSpan& a, const StepSpan& b) { return a.start_us < b.start_us; });
  if (!record.spans.empty()) {
    int64_t first = record.spans.front().start_us;
    int64_t last = first;
    for (const StepSpan& s : record.spans) last = std::max(last, s.end_us);
    record.makespan_us = last - first;
  }
  bool any_cold = record.spans.empty();
  for (const StepSpan& s : record.spans) {
    if (s.instance.value_or(InstanceState::kCold) == InstanceState::kCold) any_cold = true;
  }
  record.state_observed = any_cold ? InstanceState::kCold : InstanceState::kWarm;

  if (failure) {
    record.discard_reason = *failure;
    record.verification = Verification::kSkipped;
    return record;
  }
  if (verification_failed) {
    record.verification = Verification::kFail;
    return record;
  }
  const std::optional<Bytes>& final_output = outputs[n - 1];
  auto digest = final_output ? steps::FinalDigestOf(*final_output)
                             : absl::StatusOr<Digest256>(absl::InternalError("no final output"));
  if (!digest.ok()) {
    record.discard_reason = std::string(error_kind::kStepFailed) + ": unreadable final output: " +
                            DescribeStatus(digest.status());
    return record;
  }
  record.final_digest = ToHex(*digest);
  if (request.expected) {
    record.verification = *digest == *request.expected ? Verification::kOk : Verification::kFail;
  }
  return record;
}

}  // namespace wasmflow::orchestrator
