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

// Step executor: hosts the engine, serves invocations cold (one-shot
// instance) or warm (pooled, pre-initialized instances) in JIT or AOT mode,
// and reports the phase breakdown and resource samples of each invocation.

#ifndef WASMFLOW_EXECUTOR_EXECUTOR_H_
#define WASMFLOW_EXECUTOR_EXECUTOR_H_

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/executor/engine.h"
#include "wasmflow/protocol/frames.h"
#include "wasmflow/protocol/settings.h"

namespace wasmflow::executor {

using protocol::InvokeFrame;
using protocol::ResultFrame;

using protocol::CompileMode;
using protocol::CompileModeName;
using protocol::ParseCompileMode;
using protocol::ParseStatePolicy;
using protocol::StatePolicy;
using protocol::StatePolicyName;

struct ExecutorConfig {
  CompileMode mode = CompileMode::kJit;
  StatePolicy state_policy = StatePolicy::kWarmPool;
  int pool_size = 1;
  std::filesystem::path artifact_dir;
  std::chrono::microseconds sample_period{20000};
  // Upper bound for a guest call and for waiting on a pooled instance.
  std::chrono::milliseconds timeout{120000};
  std::filesystem::path proc_root = "/proc";
};

absl::Status ValidateConfig(const ExecutorConfig& config);

// Per-request overrides of the configured mode and state policy.
struct InvokeOptions {
  std::optional<CompileMode> mode;
  std::optional<StatePolicy> state;
};

class Executor {
 public:
  static absl::StatusOr<std::unique_ptr<Executor>> Create(ExecutorConfig config,
                                                          std::unique_ptr<HostEngine> engine);
  ~Executor();

  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  // Always returns a frame; failures are status=error frames whose error code
  // is the failure kind (StepTrap, Timeout, PoolExhausted, MissingArtifact,
  // InvalidModule, or a step error reported by the guest).
  ResultFrame Invoke(const InvokeFrame& frame, const InvokeOptions& options = {});

  // Destroys all pooled instances; the next invocation per step is cold.
  // Instances in use when the reset happens are discarded on release.
  void ResetPool();

  // Precompiles every step module in the artifact directory.
  absl::StatusOr<std::vector<PrecompileResult>> PrecompileAll();

  absl::StatusOr<std::vector<ArtifactSizeEntry>> ArtifactSizes() const;

  const ExecutorConfig& config() const { return config_; }
  const HostEngine& engine() const { return *engine_; }

 private:
  struct Pool {
    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::unique_ptr<EngineInstance>> idle;
    int live = 0;  // idle plus leased instances of the current generation
    uint64_t generation = 0;
  };

  // A lease either carries a warm instance or the right to create one.
  struct Lease {
    std::unique_ptr<EngineInstance> instance;
    uint64_t generation = 0;
  };

  struct ColdStart {
    std::unique_ptr<EngineInstance> instance;
    protocol::PhaseBreakdown phases;
  };

  Executor(ExecutorConfig config, std::unique_ptr<HostEngine> engine);

  Pool& PoolFor(StepKind kind, CompileMode mode);
  absl::StatusOr<Lease> Acquire(Pool& pool);
  void Release(Pool& pool, uint64_t generation, std::unique_ptr<EngineInstance> instance);
  absl::StatusOr<ColdStart> StartCold(StepKind kind, CompileMode mode);

  const ExecutorConfig config_;
  std::unique_ptr<HostEngine> engine_;
  std::array<Pool, 2 * std::size(kAllStepKinds)> pools_;
};

}  // namespace wasmflow::executor

#endif  // WASMFLOW_EXECUTOR_EXECUTOR_H_
