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

// The bench subcommands. Each returns a process exit code and writes human
// output to `out` and diagnostics to `err`.

#ifndef WASMFLOW_CLI_COMMANDS_H_
#define WASMFLOW_CLI_COMMANDS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "wasmflow/cli/config.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/executor/executor.h"

namespace wasmflow::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBackendFailure = 2,
  kExitVerificationFailure = 3,
};

struct BuildOptions {
  std::filesystem::path artifact_dir;
  bool aot = false;
  std::filesystem::path lockfile;  // empty: <artifact_dir>/wasmflow.lock.json
};
int CmdBuild(const BuildOptions& options, std::ostream& out, std::ostream& err);

struct ServeOptions {
  executor::ExecutorConfig executor;
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path lockfile;  // when set, artifacts must match it
  bool precompile = false;         // build AOT objects before serving
};
// Serves until SIGINT or SIGTERM. Prints "listening on <host>:<port>" once
// the socket is bound.
int CmdServe(const ServeOptions& options, std::ostream& out, std::ostream& err);

struct RunOptions {
  std::string config_path;
  ConfigOverrides overrides;
  std::optional<std::string> lockfile;
  bool dry_run = false;
};
// Exit codes: 2 when an environment is unavailable or the discarded-run share
// exceeds the configured threshold, else 3 on any verification failure.
int CmdRun(const RunOptions& options, std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
  std::string log_path;
  std::optional<std::string> meta_path;  // default: <log stem>.meta.json, if present
  std::optional<std::string> out_dir;    // default: <log dir>/report
  bool ignore_partial = false;
};
int CmdAnalyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

struct GenPayloadOptions {
  uint64_t seed = payload::kDefaultSeed;
  payload::SizeLabel size = payload::SizeLabel::kSmall;
  std::optional<std::string> out_path;  // default: raw bytes to `out`
};
int CmdGenPayload(const GenPayloadOptions& options, std::ostream& out, std::ostream& err);

struct SizesOptions {
  std::filesystem::path artifact_dir;
  std::optional<std::string> endpoint;  // fetch from a running shim instead
  bool json = false;
};
int CmdSizes(const SizesOptions& options, std::ostream& out, std::ostream& err);

// GET <base_url>/artifacts/sizes from a shim.
absl::StatusOr<std::vector<executor::ArtifactSizeEntry>> FetchArtifactSizes(
    const std::string& base_url);

// The provenance pairs written into the record metadata.
std::vector<std::pair<std::string, std::string>> CampaignProvenance(
    const CampaignConfig& config, const std::string& lockfile_digest);

}  // namespace wasmflow::cli

#endif  // WASMFLOW_CLI_COMMANDS_H_
