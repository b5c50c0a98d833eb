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

// Periodic CPU/RSS sampling of the current process from procfs.

#ifndef WASMFLOW_EXECUTOR_SAMPLER_H_
#define WASMFLOW_EXECUTOR_SAMPLER_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <thread>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/protocol/frames.h"

namespace wasmflow::executor {

using protocol::ResourceSample;

struct ProcStat {
  int64_t cpu_us = 0;  // user + system time consumed by the process
  uint64_t rss_bytes = 0;
};

// Reads `<proc_root>/self/stat` and `<proc_root>/self/statm`.
// SamplerUnavailable when either cannot be read or parsed.
absl::StatusOr<ProcStat> ReadProcStat(const std::filesystem::path& proc_root);

struct SamplingResult {
  std::vector<ResourceSample> samples;  // time-ordered
  bool best_effort = false;             // set when procfs was unavailable
};

// Samples the process every `period` between Start() and Stop(). cpu_pct is
// the consumed CPU time over the wall time since the previous reading, in
// percent of one core. Stop() always records a closing sample so short
// windows are covered. One window per object.
class ResourceSampler {
 public:
  ResourceSampler(std::filesystem::path proc_root, std::chrono::microseconds period);
  ~ResourceSampler();

  ResourceSampler(const ResourceSampler&) = delete;
  ResourceSampler& operator=(const ResourceSampler&) = delete;

  void Start();
  SamplingResult Stop();

 private:
  void Loop();
  // Appends a sample relative to the previous reading. Requires mu_.
  void TakeSample();

  const std::filesystem::path proc_root_;
  const std::chrono::microseconds period_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool running_ = false;
  bool best_effort_ = false;
  int64_t last_wall_us_ = 0;
  int64_t last_cpu_us_ = 0;
  std::vector<ResourceSample> samples_;
  std::thread thread_;
};

struct ResourceSummary {
  size_t count = 0;
  double mean_cpu_pct = 0.0;
  double peak_cpu_pct = 0.0;
  double mean_rss_bytes = 0.0;
  uint64_t peak_rss_bytes = 0;
};

ResourceSummary SummarizeResources(const std::vector<ResourceSample>& samples);

}  // namespace wasmflow::executor

#endif  // WASMFLOW_EXECUTOR_SAMPLER_H_
