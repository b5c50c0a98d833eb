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

// Step artifact layout, AOT precompilation and the size report.
//
// An artifact directory holds `stepN.wasm` per step; precompilation writes
// `stepN.cwasm` next to it plus a `stepN.cwasm.key` sidecar recording the
// source digest and engine build, so re-runs are cache hits.

#ifndef WASMFLOW_EXECUTOR_ARTIFACTS_H_
#define WASMFLOW_EXECUTOR_ARTIFACTS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/executor/engine.h"
#include "wasmflow/protocol/frames.h"

namespace wasmflow::executor {

using protocol::StepKind;

inline constexpr StepKind kAllStepKinds[] = {StepKind::kS1, StepKind::kS2, StepKind::kS3,
                                             StepKind::kS4, StepKind::kS5};

// "step1" .. "step5".
std::string ModuleStem(StepKind kind);
std::filesystem::path WasmPath(const std::filesystem::path& dir, StepKind kind);
std::filesystem::path AotPath(const std::filesystem::path& dir, StepKind kind);

struct PrecompileResult {
  std::filesystem::path object;
  bool cache_hit = false;
};

// Writes the engine-native object for `wasm_artifact` next to it. A sidecar
// key makes repeated calls with unchanged input and engine a cache hit.
// InvalidModule for a rejected module, MissingArtifact when the input is
// absent.
absl::StatusOr<PrecompileResult> PrecompileAot(HostEngine& engine,
                                               const std::filesystem::path& wasm_artifact);

struct ArtifactSizeEntry {
  StepKind step = StepKind::kS1;
  uint64_t wasm_bytes = 0;
  uint64_t aot_bytes = 0;
  int64_t pct_increase = 0;
  friend bool operator==(const ArtifactSizeEntry&, const ArtifactSizeEntry&) = default;
};

// round(100 × (aot / wasm − 1)), halves away from zero. wasm_bytes must be > 0.
int64_t PercentIncrease(uint64_t wasm_bytes, uint64_t aot_bytes);

ArtifactSizeEntry MakeSizeEntry(StepKind step, uint64_t wasm_bytes, uint64_t aot_bytes);

// One entry per step from the files in `dir`. MissingArtifact when any wasm
// or AOT file is absent.
absl::StatusOr<std::vector<ArtifactSizeEntry>> ReportArtifactSizes(
    const std::filesystem::path& dir);

}  // namespace wasmflow::executor

#endif  // WASMFLOW_EXECUTOR_ARTIFACTS_H_
