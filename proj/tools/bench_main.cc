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

// bench: build, serve, run, analyze, gen-payload and sizes.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wasmflow/cli/commands.h"

namespace {

using wasmflow::cli::kExitOk;
using wasmflow::cli::kExitUsage;

const std::vector<std::string> kModes = {"jit", "aot"};
const std::vector<std::string> kStates = {"cold", "warm"};
const std::vector<std::string> kPayloads = {"small", "medium", "large"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wasmflow benchmark harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wasmflow 0.1.0");

  // build
  wasmflow::cli::BuildOptions build;
  std::string build_artifacts = WASMFLOW_DEFAULT_ARTIFACT_DIR;
  std::string build_lockfile;
  CLI::App* build_cmd = app.add_subcommand("build", "Pin the step modules in a lockfile");
  build_cmd->add_option("--artifacts", build_artifacts, "Directory holding stepN.wasm")
      ->capture_default_str();
  build_cmd->add_flag("--aot", build.aot, "Also precompile, pin AOT objects and report sizes");
  build_cmd->add_option("--out,--lockfile", build_lockfile,
                        "Lockfile path (default: <artifacts>/wasmflow.lock.json)");

  // serve
  wasmflow::cli::ServeOptions serve;
  std::string serve_artifacts = WASMFLOW_DEFAULT_ARTIFACT_DIR;
  std::string serve_mode = "jit";
  std::string serve_state = "warm";
  int sample_ms = 20;
  int64_t timeout_ms = serve.executor.timeout.count();
  std::string serve_lockfile;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the executor shim");
  serve_cmd->add_option("--artifacts", serve_artifacts, "Artifact directory")->capture_default_str();
  serve_cmd->add_option("--host", serve.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Listen port (0 picks a free one)")
      ->capture_default_str();
  serve_cmd->add_option("--mode", serve_mode, "Default compile mode")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  serve_cmd->add_option("--state", serve_state, "Default state policy")
      ->check(CLI::IsMember(kStates))
      ->capture_default_str();
  serve_cmd->add_option("--pool-size", serve.executor.pool_size, "Warm instances per step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--sample-ms", sample_ms, "Resource sampling period")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--timeout-ms", timeout_ms, "Per-invocation timeout")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--lockfile", serve_lockfile, "Refuse artifacts that differ from it");
  serve_cmd->add_flag("--precompile", serve.precompile, "Build AOT objects before serving");

  // run
  wasmflow::cli::RunOptions run;
  std::optional<uint64_t> run_seed;
  std::optional<int> run_k;
  std::optional<std::string> run_mode, run_state, run_payload, run_env, run_out, run_lockfile;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute a measurement campaign");
  run_cmd->add_option("--config", run.config_path, "Campaign config (JSON)")->required();
  run_cmd->add_option("--seed", run_seed, "Payload seed");
  run_cmd->add_option("--k", run_k, "Measured runs per cell")->check(CLI::PositiveNumber);
  run_cmd->add_option("--mode", run_mode, "Compile mode for every cell")
      ->check(CLI::IsMember(kModes));
  run_cmd->add_option("--state", run_state, "State policy for every cell")
      ->check(CLI::IsMember(kStates));
  run_cmd->add_option("--payload", run_payload, "Payload size for every cell")
      ->check(CLI::IsMember(kPayloads));
  run_cmd->add_option("--env", run_env, "Environment for every cell");
  run_cmd->add_option("--out", run_out, "Output directory");
  run_cmd->add_option("--lockfile", run_lockfile, "Artifact lockfile");
  run_cmd->add_flag("--dry-run", run.dry_run, "Print the run order and exit");

  // analyze
  wasmflow::cli::AnalyzeOptions analyze;
  std::optional<std::string> analyze_meta, analyze_out;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Build reports from a record log");
  analyze_cmd->add_option("log,--log", analyze.log_path, "Record log (runs.jsonl)")->required();
  analyze_cmd->add_option("--meta", analyze_meta, "Campaign metadata (default: next to the log)");
  analyze_cmd->add_option("--out", analyze_out, "Report directory (default: <log dir>/report)");
  analyze_cmd->add_flag("--ignore-partial", analyze.ignore_partial,
                        "Skip an unterminated final log line");

  // gen-payload
  wasmflow::cli::GenPayloadOptions gen;
  std::string gen_payload = "small";
  std::optional<std::string> gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen-payload", "Write a deterministic payload");
  gen_cmd->add_option("--seed", gen.seed, "Payload seed")->capture_default_str();
  gen_cmd->add_option("--payload,--size", gen_payload, "Size class")
      ->check(CLI::IsMember(kPayloads))
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output file (default: stdout)");

  // sizes
  wasmflow::cli::SizesOptions sizes;
  std::string sizes_artifacts = WASMFLOW_DEFAULT_ARTIFACT_DIR;
  std::optional<std::string> sizes_endpoint;
  CLI::App* sizes_cmd = app.add_subcommand("sizes", "Report wasm vs AOT artifact sizes");
  sizes_cmd->add_option("--artifacts", sizes_artifacts, "Artifact directory")
      ->capture_default_str();
  sizes_cmd->add_option("--endpoint", sizes_endpoint, "Query a running shim instead");
  sizes_cmd->add_flag("--json", sizes.json, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*build_cmd) {
    build.artifact_dir = build_artifacts;
    build.lockfile = build_lockfile;
    return wasmflow::cli::CmdBuild(build, std::cout, std::cerr);
  }
  if (*serve_cmd) {
    serve.executor.artifact_dir = serve_artifacts;
    serve.executor.mode = *wasmflow::protocol::ParseCompileMode(serve_mode);
    serve.executor.state_policy = *wasmflow::protocol::ParseStatePolicy(serve_state);
    serve.executor.sample_period = std::chrono::milliseconds(sample_ms);
    serve.executor.timeout = std::chrono::milliseconds(timeout_ms);
    serve.lockfile = serve_lockfile;
    return wasmflow::cli::CmdServe(serve, std::cout, std::cerr);
  }
  if (*run_cmd) {
    auto& o = run.overrides;
    o.seed = run_seed;
    o.k = run_k;
    o.env = run_env;
    o.out_dir = run_out;
    if (run_mode) o.mode = *wasmflow::protocol::ParseCompileMode(*run_mode);
    if (run_state) o.state = *wasmflow::protocol::ParseStatePolicy(*run_state);
    if (run_payload) o.payload = *wasmflow::payload::ParseSizeLabel(*run_payload);
    run.lockfile = run_lockfile;
    return wasmflow::cli::CmdRun(run, std::cout, std::cerr);
  }
  if (*analyze_cmd) {
    analyze.meta_path = analyze_meta;
    analyze.out_dir = analyze_out;
    return wasmflow::cli::CmdAnalyze(analyze, std::cout, std::cerr);
  }
  if (*gen_cmd) {
    gen.size = *wasmflow::payload::ParseSizeLabel(gen_payload);
    gen.out_path = gen_out;
    return wasmflow::cli::CmdGenPayload(gen, std::cout, std::cerr);
  }
  if (*sizes_cmd) {
    sizes.artifact_dir = sizes_artifacts;
    sizes.endpoint = sizes_endpoint;
    return wasmflow::cli::CmdSizes(sizes, std::cout, std::cerr);
  }
  return kExitUsage;
}
