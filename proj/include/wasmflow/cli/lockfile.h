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

// Artifact lockfile: content digests pinning the step modules (and, when
// requested, their precompiled objects) that a campaign ran against.

#ifndef WASMFLOW_CLI_LOCKFILE_H_
#define WASMFLOW_CLI_LOCKFILE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/executor/engine.h"

namespace wasmflow::cli {

inline constexpr char kLockfileName[] = "wasmflow.lock.json";

struct PinnedArtifact {
  std::string step;  // "S1".."S5"
  std::string file;  // file name inside the artifact directory
  uint64_t bytes = 0;
  std::string blake3;  // hex
  friend bool operator==(const PinnedArtifact&, const PinnedArtifact&) = default;
};

struct Lockfile {
  std::vector<PinnedArtifact> wasm;
  // Present only when precompiled objects were pinned; they are specific to
  // the engine build named here.
  std::vector<PinnedArtifact> aot;
  std::string engine;
  std::vector<executor::ArtifactSizeEntry> sizes;
  friend bool operator==(const Lockfile&, const Lockfile&) = default;
};

// Pins the five step modules in `artifact_dir`. With a non-null `engine`,
// also precompiles (or reuses up-to-date) AOT objects, pins them and records
// their size report. BuildFailed naming the missing or failing artifact.
absl::StatusOr<Lockfile> BuildLockfile(const std::filesystem::path& artifact_dir,
                                       executor::HostEngine* engine);

// Deterministic JSON: equal lockfiles serialize to identical bytes.
std::string LockfileToJson(const Lockfile& lockfile);
absl::StatusOr<Lockfile> LockfileFromJson(std::string_view json);

// BLAKE3 hex of the lockfile's serialized bytes.
std::string LockfileDigest(const Lockfile& lockfile);

// BuildFailed when an artifact in `artifact_dir` differs from its pin.
absl::Status VerifyAgainstLockfile(const Lockfile& lockfile,
                                   const std::filesystem::path& artifact_dir);

// A size report as a plain-text table with MB to three decimals.
std::string FormatSizeTable(const std::vector<executor::ArtifactSizeEntry>& entries);

}  // namespace wasmflow::cli

#endif  // WASMFLOW_CLI_LOCKFILE_H_
