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

#include "wasmflow/orchestrator/campaign.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "wasmflow/common/errors.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::orchestrator {
namespace {

// Salt separating the run-id stream from the permutation stream.
constexpr uint64_t kRunIdSalt = 0x5bd1e9955bd1e995ULL;

// Random (version 4) UUID drawn from `rng`.
std::string MakeUuid(std::mt19937_64& rng) {
  uint64_t hi = rng();
  uint64_t lo = rng();
  hi = (hi & ~0xF000ULL) | 0x4000ULL;
  lo = (lo & ~(0xC0ULL << 56)) | (0x80ULL << 56);
  char buf[37];
  std::snprintf(buf, sizeof(buf), "%08x-%04x-%04x-%04x-%012llx",
                static_cast<unsigned>(hi >> 32), static_cast<unsigned>((hi >> 16) & 0xFFFF),
                static_cast<unsigned>(hi & 0xFFFF), static_cast<unsigned>(lo >> 48),
                static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFULL));
  return buf;
}

// Generated payloads and oracle digests, computed once per size class.
class PayloadCache {
 public:
  explicit PayloadCache(uint64_t seed) : seed_(seed) {}

  absl::StatusOr<const std::pair<Bytes, Digest256>*> Get(payload::SizeLabel size) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(size);
    if (it != entries_.end()) return &it->second;
    Bytes raw = payload::Generate({seed_, size});
    auto digest = OracleDigest(seed_, size);
    if (!digest.ok()) return digest.status();
    return &entries_.emplace(size, std::make_pair(std::move(raw), *digest)).first->second;
  }

 private:
  const uint64_t seed_;
  std::mutex mu_;
  std::map<payload::SizeLabel, std::pair<Bytes, Digest256>> entries_;
};

RunRecord UnavailableRecord(const PlannedRun& run, uint64_t seed, const absl::Status& status) {
  RunRecord record;
  record.run_id = run.run_id;
  record.cell = run.cell;
  record.repetition = run.repetition;
  record.seed = seed;
  record.verification = Verification::kSkipped;
  std::string detail(status.message().data(), status.message().size());
  record.discard_reason = HasErrorKind(status, error_kind::kBackendUnavailable)
                              ? detail
                              : std::string(error_kind::kBackendUnavailable) + ": " + detail;
  return record;
}

}  // namespace

std::vector<PlannedRun> PlanOrder(const std::vector<CellSpec>& cells, int k, uint64_t order_seed) {
  std::vector<PlannedRun> plan;
  plan.reserve(cells.size() * std::max(k, 0));
  for (const CellSpec& cell : cells) {
    for (int rep = 0; rep < k; ++rep) plan.push_back(PlannedRun{cell, rep, ""});
  }
  // Fisher-Yates with an explicitly specified generator and bound reduction,
  // so the order is identical across standard library implementations.
  std::mt19937_64 rng(order_seed);
  for (size_t i = plan.size(); i > 1; --i) {
    size_t j = UniformBelow(rng, i);
    std::swap(plan[i - 1], plan[j]);
  }
  std::mt19937_64 id_rng(order_seed ^ kRunIdSalt);
  for (PlannedRun& run : plan) {
    run.run_id = run.cell.Id() + "-" + std::to_string(run.repetition) + "-" + MakeUuid(id_rng);
  }
  return plan;
}

absl::StatusOr<Digest256> OracleDigest(uint64_t seed, payload::SizeLabel size) {
  if (auto golden = steps::GoldenDigest(seed, size)) return *golden;
  Bytes raw = payload::Generate({seed, size});
  auto result = steps::RunNativePipeline(raw);
  if (!result.ok()) return result.status();
  return result->final_digest;
}

absl::StatusOr<PlanSummary> RunPlan(const BackendMap& backends, const PlanConfig& config,
                                    RecordSink& sink) {
  std::map<std::string, absl::Status> health;
  for (const CellSpec& cell : config.cells) {
    auto it = backends.find(cell.env);
    if (it == backends.end() || it->second == nullptr) {
      return absl::InvalidArgumentError("no backend configured for environment '" + cell.env + "'");
    }
    if (!health.count(cell.env)) health[cell.env] = it->second->Health();
  }

  PlanSummary summary;
  for (const auto& [env, status] : health) {
    if (!status.ok()) summary.unavailable_envs.push_back(env);
  }

  PayloadCache payloads(config.payload_seed);
  std::set<std::string> primed;  // ids of warm cells whose instances are live

  auto forget_env = [&primed](const std::string& env) {
    for (auto it = primed.begin(); it != primed.end();) {
      it = it->rfind(env + "/", 0) == 0 ? primed.erase(it) : std::next(it);
    }
  };

  // Runs one workflow; cold cells get a fresh pool first.
  auto execute = [&](const CellSpec& cell, const std::string& run_id,
                     int repetition) -> absl::StatusOr<RunRecord> {
    Backend& backend = *backends.at(cell.env);
    auto entry = payloads.Get(cell.payload);
    if (!entry.ok()) return entry.status();
    if (cell.state == StatePolicy::kColdOneShot) {
      absl::Status reset = backend.ResetPool();
      forget_env(cell.env);
      if (!reset.ok()) return reset;
    }
    WorkflowRequest request;
    request.cell = cell;
    request.run_id = run_id;
    request.repetition = repetition;
    request.seed = config.payload_seed;
    request.raw = (*entry)->first;
    request.expected = (*entry)->second;
    return ExecuteWorkflow(backend, request, config.workflow);
  };

  for (const CellSpec& cell : config.cells) {
    if (!health[cell.env].ok()) continue;
    for (int i = 0; i < config.warmups; ++i) {
      auto warmup = execute(cell, "warmup-" + cell.Id() + "-" + std::to_string(i), -1);
      // A backend that dropped out shows up as flagged measured records.
      if (!warmup.ok() && !HasErrorKind(warmup.status(), error_kind::kBackendUnavailable)) {
        return warmup.status();
      }
    }
    if (cell.state == StatePolicy::kWarmPool && config.warmups > 0) primed.insert(cell.Id());
  }

  for (const PlannedRun& run : PlanOrder(config.cells, config.k, config.order_seed)) {
    RunRecord record;
    const absl::Status& env_health = health[run.cell.env];
    if (!env_health.ok()) {
      record = UnavailableRecord(run, config.payload_seed, env_health);
    } else {
      if (run.cell.state == StatePolicy::kWarmPool && !primed.count(run.cell.Id())) {
        auto prime = execute(run.cell, "prime-" + run.run_id, -1);
        if (!prime.ok() && !HasErrorKind(prime.status(), error_kind::kBackendUnavailable)) {
          return prime.status();
        }
        primed.insert(run.cell.Id());
      }
      auto executed = execute(run.cell, run.run_id, run.repetition);
      if (executed.ok()) {
        record = *std::move(executed);
      } else if (HasErrorKind(executed.status(), error_kind::kBackendUnavailable)) {
        record = UnavailableRecord(run, config.payload_seed, executed.status());
      } else {
        return executed.status();
      }
    }
    if (absl::Status s = sink.Append(record); !s.ok()) return s;
    ++summary.executed;
    if (record.Discarded()) ++summary.discarded;
    if (record.verification == Verification::kFail) ++summary.verification_failures;
  }
  return summary;
}

absl::StatusOr<ThroughputResult> ThroughputRun(Backend& backend, const ThroughputConfig& config) {
  if (config.concurrency < 1) return absl::InvalidArgumentError("concurrency must be >= 1");
  if (config.duration.count() <= 0) return absl::InvalidArgumentError("duration must be > 0");
  PayloadCache payloads(config.payload_seed);
  auto entry = payloads.Get(config.cell.payload);
  if (!entry.ok()) return entry.status();
  if (config.cell.state == StatePolicy::kColdOneShot) {
    return absl::InvalidArgumentError("throughput is measured on warm cells only");
  }
  // One unmeasured workflow so the clock starts on a warm backend.
  {
    WorkflowRequest prime;
    prime.cell = config.cell;
    prime.run_id = "tput-prime";
    prime.seed = config.payload_seed;
    prime.raw = (*entry)->first;
    prime.expected = (*entry)->second;
    RunRecord record = ExecuteWorkflow(backend, prime, config.workflow);
    if (record.Discarded()) {
      return MakeError(absl::StatusCode::kUnavailable, error_kind::kBackendUnavailable,
                       "throughput priming run failed: " + *record.discard_reason);
    }
  }

  std::atomic<int64_t> completed{0};
  std::atomic<int64_t> failed{0};
  std::atomic<int64_t> last_end_us{0};
  const int64_t start_us = MonotonicMicros();
  const int64_t deadline_us = start_us + config.duration.count() * 1000;

  auto client = [&](int client_id) {
    for (int64_t i = 0; MonotonicMicros() < deadline_us; ++i) {
      WorkflowRequest request;
      request.cell = config.cell;
      request.run_id = "tput-" + std::to_string(client_id) + "-" + std::to_string(i);
      request.repetition = static_cast<int>(i);
      request.seed = config.payload_seed;
      request.raw = (*entry)->first;
      request.expected = (*entry)->second;
      RunRecord record = ExecuteWorkflow(backend, request, config.workflow);
      if (!record.Discarded() && record.verification == Verification::kOk) {
        ++completed;
      } else {
        ++failed;
      }
      int64_t now = MonotonicMicros();
      int64_t prev = last_end_us.load();
      while (prev < now && !last_end_us.compare_exchange_weak(prev, now)) {
      }
    }
  };
  std::vector<std::thread> clients;
  for (int c = 0; c < config.concurrency; ++c) clients.emplace_back(client, c);
  for (std::thread& t : clients) t.join();

  ThroughputResult result;
  result.cell = config.cell;
  result.concurrency = config.concurrency;
  result.completed = completed.load();
  result.failed = failed.load();
  result.elapsed_s = std::max<int64_t>(last_end_us.load() - start_us, 1) / 1e6;
  result.per_second = result.completed / result.elapsed_s;
  return result;
}

}  // namespace wasmflow::orchestrator
