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

#include "wasmflow/executor/executor.h"

#include <string>
#include <utility>

#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"
#include "wasmflow/executor/sampler.h"

namespace wasmflow::executor {
namespace {

using protocol::ErrorResult;
using protocol::InstanceState;
using protocol::PhaseBreakdown;

absl::Status InvalidConfig(std::string_view detail) {
  return absl::InvalidArgumentError("invalid executor config: " + std::string(detail));
}

ResultFrame FromStatus(const absl::Status& status) {
  std::string_view kind = ErrorKindOf(status);
  return ErrorResult(kind.empty() ? error_kind::kStepFailed : kind, ErrorDetailOf(status));
}

}  // namespace

absl::Status ValidateConfig(const ExecutorConfig& config) {
  if (config.pool_size < 1) return InvalidConfig("pool_size must be >= 1");
  if (config.sample_period.count() <= 0) return InvalidConfig("sample_period must be > 0");
  if (config.timeout.count() <= 0) return InvalidConfig("timeout must be > 0");
  if (config.artifact_dir.empty()) return InvalidConfig("artifact_dir is required");
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<Executor>> Executor::Create(ExecutorConfig config,
                                                           std::unique_ptr<HostEngine> engine) {
  if (auto s = ValidateConfig(config); !s.ok()) return s;
  if (engine == nullptr) {
    return MakeError(absl::StatusCode::kFailedPrecondition, error_kind::kEngineUnavailable,
                     "no engine");
  }
  return std::unique_ptr<Executor>(new Executor(std::move(config), std::move(engine)));
}

Executor::Executor(ExecutorConfig config, std::unique_ptr<HostEngine> engine)
    : config_(std::move(config)), engine_(std::move(engine)) {}

Executor::~Executor() { ResetPool(); }

Executor::Pool& Executor::PoolFor(StepKind kind, CompileMode mode) {
  size_t index = (static_cast<size_t>(kind) - 1) * 2 + static_cast<size_t>(mode);
  return pools_[index];
}

absl::StatusOr<Executor::Lease> Executor::Acquire(Pool& pool) {
  std::unique_lock<std::mutex> lock(pool.mu);
  auto deadline = std::chrono::steady_clock::now() + config_.timeout;
  for (;;) {
    if (!pool.idle.empty()) {
      Lease lease{std::move(pool.idle.back()), pool.generation};
      pool.idle.pop_back();
      return lease;
    }
    if (pool.live < config_.pool_size) {
      ++pool.live;
      return Lease{nullptr, pool.generation};
    }
    if (pool.cv.wait_until(lock, deadline) == std::cv_status::timeout && pool.idle.empty() &&
        pool.live >= config_.pool_size) {
      return MakeError(absl::StatusCode::kResourceExhausted, error_kind::kPoolExhausted,
                       "no pooled instance became available within the timeout");
    }
  }
}

void Executor::Release(Pool& pool, uint64_t generation,
                       std::unique_ptr<EngineInstance> instance) {
  std::unique_ptr<EngineInstance> discard;
  {
    std::lock_guard<std::mutex> lock(pool.mu);
    if (generation != pool.generation) {
      // Reset while leased: the slot was already reclaimed.
      discard = std::move(instance);
    } else if (instance != nullptr) {
      pool.idle.push_back(std::move(instance));
    } else {
      --pool.live;
    }
  }
  pool.cv.notify_one();
}

void Executor::ResetPool() {
  for (Pool& pool : pools_) {
    std::vector<std::unique_ptr<EngineInstance>> discard;
    {
      std::lock_guard<std::mutex> lock(pool.mu);
      discard.swap(pool.idle);
      pool.live = 0;
      ++pool.generation;
    }
    pool.cv.notify_all();
  }
}

absl::StatusOr<Executor::ColdStart> Executor::StartCold(StepKind kind, CompileMode mode) {
  ColdStart cold;
  std::filesystem::path path = mode == CompileMode::kJit ? WasmPath(config_.artifact_dir, kind)
                                                         : AotPath(config_.artifact_dir, kind);
  int64_t t = MonotonicMicros();
  auto bytes = ReadFileBytes(path.string());
  if (!bytes.ok()) {
    return MakeError(absl::StatusCode::kNotFound, error_kind::kMissingArtifact, path.string());
  }
  int64_t now = MonotonicMicros();
  cold.phases.load_us = now - t;

  t = now;
  auto module = mode == CompileMode::kJit ? engine_->Compile(*bytes)
                                          : engine_->LoadPrecompiled(*bytes);
  if (!module.ok()) return module.status();
  now = MonotonicMicros();
  cold.phases.compile_us = now - t;

  t = now;
  auto instance = engine_->Instantiate(*std::move(module));
  if (!instance.ok()) return instance.status();
  now = MonotonicMicros();
  cold.phases.instantiate_us = now - t;

  t = now;
  if (auto s = (*instance)->Init(); !s.ok()) return s;
  cold.phases.init_us = MonotonicMicros() - t;
  cold.instance = *std::move(instance);
  return cold;
}

ResultFrame Executor::Invoke(const InvokeFrame& frame, const InvokeOptions& options) {
  const int64_t t0 = MonotonicMicros();
  const CompileMode mode = options.mode.value_or(config_.mode);
  const StatePolicy policy = options.state.value_or(config_.state_policy);
  const StepKind kind = frame.step_id.kind;

  PhaseBreakdown phases;
  InstanceState observed = InstanceState::kCold;
  std::unique_ptr<EngineInstance> instance;
  Pool* pool = nullptr;
  uint64_t generation = 0;

  auto finish = [&](ResultFrame result) {
    result.run_id = frame.run_id;
    result.step_id = frame.step_id;
    result.instance = observed;
    result.phase_breakdown = phases;
    result.total_us = MonotonicMicros() - t0;
    return result;
  };

  if (policy == StatePolicy::kWarmPool) {
    pool = &PoolFor(kind, mode);
    auto lease = Acquire(*pool);
    if (!lease.ok()) return finish(FromStatus(lease.status()));
    generation = lease->generation;
    if (lease->instance != nullptr) {
      instance = std::move(lease->instance);
      observed = InstanceState::kWarm;
    }
  }
  if (instance == nullptr) {
    auto cold = StartCold(kind, mode);
    if (!cold.ok()) {
      if (pool != nullptr) Release(*pool, generation, nullptr);
      return finish(FromStatus(cold.status()));
    }
    instance = std::move(cold->instance);
    phases = cold->phases;
  }

  Bytes input = protocol::EncodeFrame(frame);
  ResourceSampler sampler(config_.proc_root, config_.sample_period);
  sampler.Start();
  int64_t t = MonotonicMicros();
  auto output = instance->Call(input);
  phases.execute_us = MonotonicMicros() - t;
  SamplingResult sampling = sampler.Stop();

  ResultFrame result;
  bool healthy = output.ok();
  if (output.ok()) {
    auto decoded = protocol::DecodeResultFrame(*output);
    if (decoded.ok()) {
      result = *std::move(decoded);
    } else {
      healthy = false;
      result = ErrorResult(error_kind::kStepTrap,
                           "guest returned an invalid result frame: " +
                               std::string(ErrorDetailOf(decoded.status())));
    }
  } else {
    result = FromStatus(output.status());
  }
  result.resource_samples = std::move(sampling.samples);
  result.resource_best_effort = sampling.best_effort;

  if (pool != nullptr) {
    // A trapped or timed-out instance is not reused.
    Release(*pool, generation, healthy ? std::move(instance) : nullptr);
  }
  ResultFrame reply = finish(std::move(result));
  instance.reset();  // One-shot teardown happens after the reply is built.
  return reply;
}

absl::StatusOr<std::vector<PrecompileResult>> Executor::PrecompileAll() {
  std::vector<PrecompileResult> results;
  for (StepKind kind : kAllStepKinds) {
    auto r = PrecompileAot(*engine_, WasmPath(config_.artifact_dir, kind));
    if (!r.ok()) return r.status();
    results.push_back(*std::move(r));
  }
  return results;
}

absl::StatusOr<std::vector<ArtifactSizeEntry>> Executor::ArtifactSizes() const {
  return ReportArtifactSizes(config_.artifact_dir);
}

}  // namespace wasmflow::executor
