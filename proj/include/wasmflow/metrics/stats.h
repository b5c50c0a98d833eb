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

// Robust summary statistics for latency samples.

#ifndef WASMFLOW_METRICS_STATS_H_
#define WASMFLOW_METRICS_STATS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace wasmflow::metrics {

inline constexpr int kBootstrapResamples = 1000;
inline constexpr uint64_t kDefaultBootstrapSeed = 0x77617366;  // "wasf"
inline constexpr double kOutlierFenceFactor = 1.5;

// Quantile q in [0, 1] of ascending `sorted` by linear interpolation between
// order statistics: position q·(n−1). `sorted` must be nonempty.
double PercentileSorted(std::span<const double> sorted, double q);

struct OutlierSplit {
  std::vector<double> kept;     // input order preserved
  std::vector<double> removed;  // input order preserved
};

// One pass of the 1.5×IQR rule: drops samples outside
// [p25 − 1.5·IQR, p75 + 1.5·IQR]. Fences are computed once, never iterated.
OutlierSplit FilterOutliers(std::span<const double> samples);

struct StatsSummary {
  size_t n = 0;  // samples after outlier removal
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double iqr = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  size_t outliers_removed = 0;
  friend bool operator==(const StatsSummary&, const StatsSummary&) = default;
};

// Percentile bootstrap CI95 of the median from `resamples` resamples drawn
// with a generator seeded by `seed`. The interval is widened, if needed, to
// contain the sample median.
std::pair<double, double> BootstrapMedianCi95(std::span<const double> samples, uint64_t seed,
                                              int resamples = kBootstrapResamples);

// Filters outliers, then summarizes the kept samples. EmptyInput when
// `samples` is empty.
absl::StatusOr<StatsSummary> Summarize(std::span<const double> samples,
                                       uint64_t bootstrap_seed = kDefaultBootstrapSeed,
                                       int resamples = kBootstrapResamples);

}  // namespace wasmflow::metrics

#endif  // WASMFLOW_METRICS_STATS_H_
