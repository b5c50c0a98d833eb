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

#include "wasmflow/executor/sampler.h"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"

namespace wasmflow::executor {
namespace {

absl::Status Unavailable(std::string_view detail) {
  return MakeError(absl::StatusCode::kUnavailable, error_kind::kSamplerUnavailable, detail);
}

}  // namespace

absl::StatusOr<ProcStat> ReadProcStat(const std::filesystem::path& proc_root) {
  std::ifstream stat(proc_root / "self" / "stat");
  std::string line;
  if (!stat || !std::getline(stat, line)) return Unavailable("cannot read self/stat");
  // The command name is parenthesized and may contain spaces; fields resume
  // after the last ')'. utime and stime are fields 14 and 15 overall.
  size_t close = line.rfind(')');
  if (close == std::string::npos) return Unavailable("unparseable self/stat");
  std::istringstream fields(line.substr(close + 1));
  std::string field;
  uint64_t utime = 0, stime = 0;
  for (int index = 3; index <= 15 && fields >> field; ++index) {
    uint64_t* target = index == 14 ? &utime : index == 15 ? &stime : nullptr;
    if (target != nullptr &&
        std::from_chars(field.data(), field.data() + field.size(), *target).ec != std::errc()) {
      return Unavailable("non-numeric cpu time in self/stat");
    }
  }
  if (!fields) return Unavailable("truncated self/stat");

  std::ifstream statm(proc_root / "self" / "statm");
  uint64_t size_pages = 0, resident_pages = 0;
  if (!(statm >> size_pages >> resident_pages)) return Unavailable("cannot read self/statm");

  static const long kTicksPerSecond = sysconf(_SC_CLK_TCK);
  static const long kPageSize = sysconf(_SC_PAGESIZE);
  ProcStat out;
  out.cpu_us = static_cast<int64_t>((utime + stime) * 1000000 / kTicksPerSecond);
  out.rss_bytes = resident_pages * static_cast<uint64_t>(kPageSize);
  return out;
}

ResourceSampler::ResourceSampler(std::filesystem::path proc_root,
                                 std::chrono::microseconds period)
    : proc_root_(std::move(proc_root)), period_(std::max(period, std::chrono::microseconds(1))) {}

ResourceSampler::~ResourceSampler() {
  if (thread_.joinable()) Stop();
}

void ResourceSampler::Start() {
  std::lock_guard<std::mutex> lock(mu_);
  auto baseline = ReadProcStat(proc_root_);
  if (!baseline.ok()) {
    best_effort_ = true;
    return;
  }
  last_wall_us_ = MonotonicMicros();
  last_cpu_us_ = baseline->cpu_us;
  running_ = true;
  thread_ = std::thread([this] { Loop(); });
}

SamplingResult ResourceSampler::Stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (!running_) return SamplingResult{{}, best_effort_};
    running_ = false;
  }
  cv_.notify_all();
  thread_.join();
  std::lock_guard<std::mutex> lock(mu_);
  // Closing sample, unless the periodic one just covered the window end.
  if (samples_.empty() || MonotonicMicros() - last_wall_us_ >= period_.count() / 2) {
    TakeSample();
  }
  return SamplingResult{std::move(samples_), best_effort_};
}

void ResourceSampler::Loop() {
  std::unique_lock<std::mutex> lock(mu_);
  auto next = std::chrono::steady_clock::now() + period_;
  while (!cv_.wait_until(lock, next, [this] { return !running_; })) {
    TakeSample();
    next += period_;
  }
}

void ResourceSampler::TakeSample() {
  auto stat = ReadProcStat(proc_root_);
  int64_t now = MonotonicMicros();
  if (!stat.ok()) {
    best_effort_ = true;
    return;
  }
  int64_t wall = now - last_wall_us_;
  double cpu_pct =
      wall > 0 ? 100.0 * static_cast<double>(stat->cpu_us - last_cpu_us_) / wall : 0.0;
  samples_.push_back(ResourceSample{now, std::max(cpu_pct, 0.0), stat->rss_bytes});
  last_wall_us_ = now;
  last_cpu_us_ = stat->cpu_us;
}

ResourceSummary SummarizeResources(const std::vector<ResourceSample>& samples) {
  ResourceSummary s;
  s.count = samples.size();
  if (samples.empty()) return s;
  double cpu_sum = 0.0, rss_sum = 0.0;
  for (const ResourceSample& r : samples) {
    cpu_sum += r.cpu_pct;
    rss_sum += static_cast<double>(r.rss_bytes);
    s.peak_cpu_pct = std::max(s.peak_cpu_pct, r.cpu_pct);
    s.peak_rss_bytes = std::max(s.peak_rss_bytes, r.rss_bytes);
  }
  s.mean_cpu_pct = cpu_sum / samples.size();
  s.mean_rss_bytes = rss_sum / samples.size();
  return s;
}

}  // namespace wasmflow::executor
