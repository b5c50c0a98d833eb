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

// Brute-force reference statistics: full sorts and textbook definitions,
// used to cross-check the optimized implementations.

#ifndef WASMFLOW_TESTS_SUPPORT_STATS_ORACLE_H_
#define WASMFLOW_TESTS_SUPPORT_STATS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wasmflow/common/util.h"

namespace wasmflow::test {

// Sample set shaped like latency data: log-normal body, integer-valued ties,
// occasional far outliers.
inline std::vector<double> RandomSampleSet(std::mt19937_64& rng, size_t n) {
  std::lognormal_distribution<double> body(std::log(1000.0), 0.3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool integral = unit(rng) < 0.5;
  std::vector<double> x(n);
  for (double& v : x) {
    v = body(rng);
    if (unit(rng) < 0.03) v *= 20.0;
    if (integral) v = std::round(v / 10.0) * 10.0;
  }
  return x;
}

inline double OraclePercentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double h = q * static_cast<double>(v.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

struct OracleSplit {
  std::vector<double> kept;
  std::vector<double> removed;
};

inline OracleSplit OracleFilter(const std::vector<double>& x) {
  const double p25 = OraclePercentile(x, 0.25);
  const double p75 = OraclePercentile(x, 0.75);
  const double fence = 1.5 * (p75 - p25);
  OracleSplit split;
  for (double v : x) {
    if (v < p25 - fence || v > p75 + fence) {
      split.removed.push_back(v);
    } else {
      split.kept.push_back(v);
    }
  }
  return split;
}

struct OracleSummary {
  size_t n = 0;
  size_t outliers_removed = 0;
  double median = 0, p25 = 0, p75 = 0, iqr = 0, ci95_low = 0, ci95_high = 0;
};

// Same resampling stream as the library (index draws from mt19937_64(seed)),
// but every median comes from a full sort.
inline OracleSummary OracleSummarize(const std::vector<double>& x, uint64_t seed, int resamples) {
  OracleSplit split = OracleFilter(x);
  const std::vector<double>& kept = split.kept;
  OracleSummary s;
  s.n = kept.size();
  s.outliers_removed = split.removed.size();
  s.median = OraclePercentile(kept, 0.5);
  s.p25 = OraclePercentile(kept, 0.25);
  s.p75 = OraclePercentile(kept, 0.75);
  s.iqr = s.p75 - s.p25;
  std::mt19937_64 rng(seed);
  std::vector<double> medians;
  for (int b = 0; b < resamples; ++b) {
    std::vector<double> resample(kept.size());
    for (double& v : resample) v = kept[UniformBelow(rng, kept.size())];
    medians.push_back(OraclePercentile(resample, 0.5));
  }
  s.ci95_low = std::min(OraclePercentile(medians, 0.025), s.median);
  s.ci95_high = std::max(OraclePercentile(medians, 0.975), s.median);
  return s;
}

}  // namespace wasmflow::test

#endif  // WASMFLOW_TESTS_SUPPORT_STATS_ORACLE_H_
