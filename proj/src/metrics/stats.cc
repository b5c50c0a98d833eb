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

#include "wasmflow/metrics/stats.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"

namespace wasmflow::metrics {
namespace {

// Median of `values` (reordered in place), consistent with
// PercentileSorted(sorted, 0.5).
double MedianInPlace(std::vector<double>& values) {
  const size_t n = values.size();
  const size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return lower + 0.5 * (upper - lower);
}

}  // namespace

double PercentileSorted(std::span<const double> sorted, double q) {
  const size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const size_t lo = std::min(static_cast<size_t>(std::floor(h)), n - 1);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

OutlierSplit FilterOutliers(std::span<const double> samples) {
  OutlierSplit split;
  if (samples.empty()) return split;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double p25 = PercentileSorted(sorted, 0.25);
  const double p75 = PercentileSorted(sorted, 0.75);
  const double iqr = p75 - p25;
  const double low = p25 - kOutlierFenceFactor * iqr;
  const double high = p75 + kOutlierFenceFactor * iqr;
  for (double x : samples) {
    (x < low || x > high ? split.removed : split.kept).push_back(x);
  }
  return split;
}

std::pair<double, double> BootstrapMedianCi95(std::span<const double> samples, uint64_t seed,
                                              int resamples) {
  const size_t n = samples.size();
  std::vector<double> copy(samples.begin(), samples.end());
  const double median = MedianInPlace(copy);
  std::mt19937_64 rng(seed);
  std::vector<double> medians;
  medians.reserve(resamples);
  std::vector<double> resample(n);
  for (int b = 0; b < resamples; ++b) {
    for (size_t i = 0; i < n; ++i) resample[i] = samples[UniformBelow(rng, n)];
    medians.push_back(MedianInPlace(resample));
  }
  std::sort(medians.begin(), medians.end());
  double low = PercentileSorted(medians, 0.025);
  double high = PercentileSorted(medians, 0.975);
  return {std::min(low, median), std::max(high, median)};
}

absl::StatusOr<StatsSummary> Summarize(std::span<const double> samples, uint64_t bootstrap_seed,
                                       int resamples) {
  if (samples.empty()) {
    return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kEmptyInput,
                     "cannot summarize an empty sample set");
  }
  OutlierSplit split = FilterOutliers(samples);
  std::vector<double> sorted = split.kept;
  std::sort(sorted.begin(), sorted.end());
  StatsSummary s;
  s.n = sorted.size();
  s.outliers_removed = split.removed.size();
  s.median = PercentileSorted(sorted, 0.5);
  s.p25 = PercentileSorted(sorted, 0.25);
  s.p75 = PercentileSorted(sorted, 0.75);
  s.iqr = s.p75 - s.p25;
  auto [low, high] = BootstrapMedianCi95(split.kept, bootstrap_seed, resamples);
  s.ci95_low = low;
  s.ci95_high = high;
  return s;
}

}  // namespace wasmflow::metrics
