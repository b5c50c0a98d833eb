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

#include "wasmflow/cli/commands.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "wasmflow/cli/lockfile.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"
#include "wasmflow/executor/engine.h"
#include "wasmflow/executor/shim_server.h"
#include "wasmflow/metrics/reports.h"
#include "wasmflow/metrics/stats.h"
#include "wasmflow/orchestrator/campaign.h"
#include "wasmflow/orchestrator/record.h"

namespace wasmflow::cli {
namespace {

using orchestrator::RunRecord;

std::string Message(const absl::Status& status) {
  return std::string(status.message().data(), status.message().size());
}

absl::StatusOr<std::string> ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Prints one progress line per appended record.
class ProgressSink : public orchestrator::RecordSink {
 public:
  ProgressSink(orchestrator::RecordSink& inner, size_t total, std::ostream& out)
      : inner_(inner), total_(total), out_(out) {}

  absl::Status Append(const RunRecord& record) override {
    ++count_;
    out_ << "[" << count_ << "/" << total_ << "] " << record.run_id << " ";
    if (record.Discarded()) {
      out_ << "discarded: " << *record.discard_reason;
    } else {
      out_ << orchestrator::VerificationName(record.verification) << " makespan_us="
           << record.makespan_us;
    }
    out_ << std::endl;
    return inner_.Append(record);
  }

 private:
  orchestrator::RecordSink& inner_;
  size_t total_;
  size_t count_ = 0;
  std::ostream& out_;
};

std::vector<metrics::ArtifactSizeRow> ToRows(const std::vector<executor::ArtifactSizeEntry>& in) {
  std::vector<metrics::ArtifactSizeRow> rows;
  for (const auto& e : in) {
    rows.push_back({protocol::StepKindName(e.step), e.wasm_bytes, e.aot_bytes, e.pct_increase});
  }
  return rows;
}

std::filesystem::path DefaultMetaPath(const std::filesystem::path& log) {
  std::filesystem::path meta = log;
  meta.replace_extension(".meta.json");
  return meta;
}

}  // namespace

int CmdBuild(const BuildOptions& options, std::ostream& out, std::ostream& err) {
  std::unique_ptr<executor::HostEngine> engine;
  if (options.aot) {
    auto made = executor::MakeWasmtimeEngine();
    if (!made.ok()) {
      err << "error: " << Message(made.status()) << "\n";
      return kExitBackendFailure;
    }
    engine = *std::move(made);
  }
  auto lock = BuildLockfile(options.artifact_dir, engine.get());
  if (!lock.ok()) {
    err << "error: " << Message(lock.status()) << "\n";
    return kExitUsage;
  }
  const std::filesystem::path path =
      options.lockfile.empty() ? options.artifact_dir / kLockfileName : options.lockfile;
  if (auto s = WriteFileText(path.string(), LockfileToJson(*lock)); !s.ok()) {
    err << "error: " << Message(s) << "\n";
    return kExitUsage;
  }
  out << "wrote " << path.string() << " (" << lock->wasm.size() << " wasm";
  if (!lock->aot.empty()) out << ", " << lock->aot.size() << " aot";
  out << " digests; blake3 " << LockfileDigest(*lock) << ")\n";
  if (!lock->sizes.empty()) out << FormatSizeTable(lock->sizes);
  return kExitOk;
}

int CmdServe(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  if (auto s = executor::ValidateConfig(options.executor); !s.ok()) {
    err << "error: " << Message(s) << "\n";
    return kExitUsage;
  }
  if (!options.lockfile.empty()) {
    auto text = ReadText(options.lockfile.string());
    if (!text.ok()) {
      err << "error: " << Message(text.status()) << "\n";
      return kExitUsage;
    }
    auto lock = LockfileFromJson(*text);
    if (!lock.ok()) {
      err << "error: " << Message(lock.status()) << "\n";
      return kExitUsage;
    }
    if (auto s = VerifyAgainstLockfile(*lock, options.executor.artifact_dir); !s.ok()) {
      err << "error: " << Message(s) << "\n";
      return kExitUsage;
    }
  }
  // Block the stop signals before any thread starts so that every thread
  // inherits the mask and only sigwait below receives them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);
  struct RestoreMask {
    sigset_t mask;
    ~RestoreMask() { pthread_sigmask(SIG_SETMASK, &mask, nullptr); }
  } restore{previous};

  executor::EngineOptions engine_options;
  engine_options.timeout = options.executor.timeout;
  auto engine = executor::MakeWasmtimeEngine(engine_options);
  if (!engine.ok()) {
    err << "error: " << Message(engine.status()) << "\n";
    return kExitBackendFailure;
  }
  auto exec = executor::Executor::Create(options.executor, *std::move(engine));
  if (!exec.ok()) {
    err << "error: " << Message(exec.status()) << "\n";
    return kExitBackendFailure;
  }
  if (options.precompile || options.executor.mode == protocol::CompileMode::kAot) {
    auto objects = (*exec)->PrecompileAll();
    if (!objects.ok()) {
      err << "error: " << Message(objects.status()) << "\n";
      return kExitBackendFailure;
    }
  }
  executor::ShimServer server(**exec);
  auto port = server.Start(options.host, options.port);
  if (!port.ok()) {
    err << "error: " << Message(port.status()) << "\n";
    return kExitBackendFailure;
  }
  out << "listening on " << options.host << ":" << *port << " (engine "
      << (*exec)->engine().Name() << " " << (*exec)->engine().Version() << ", pool_size "
      << options.executor.pool_size << ")" << std::endl;
  int signal_number = 0;
  sigwait(&stop_signals, &signal_number);
  server.Stop();
  out << "stopped" << std::endl;
  return kExitOk;
}

absl::StatusOr<std::vector<executor::ArtifactSizeEntry>> FetchArtifactSizes(
    const std::string& base_url) {
  httplib::Client client(base_url);
  client.set_connection_timeout(std::chrono::seconds(5));
  auto response = client.Get("/artifacts/sizes");
  if (!response || response->status != 200) {
    return MakeError(absl::StatusCode::kUnavailable, error_kind::kBackendUnavailable,
                     "no artifact sizes from " + base_url);
  }
  auto j = nlohmann::json::parse(response->body, nullptr, /*allow_exceptions=*/false);
  if (!j.is_array()) return absl::InvalidArgumentError("artifact sizes: not a JSON list");
  std::vector<executor::ArtifactSizeEntry> entries;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("step") || !e["step"].is_string()) {
      return absl::InvalidArgumentError("artifact sizes: malformed entry");
    }
    auto kind = protocol::ParseStepKindName(e["step"].get<std::string>());
    if (!kind) return absl::InvalidArgumentError("artifact sizes: unknown step");
    entries.push_back(executor::MakeSizeEntry(*kind, e.value("wasm_bytes", uint64_t{0}),
                                              e.value("aot_bytes", uint64_t{0})));
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> CampaignProvenance(
    const CampaignConfig& config, const std::string& lockfile_digest) {
  return {{"config_hash", ConfigHash(config)},
          {"lockfile", config.lockfile.empty() ? "none" : config.lockfile},
          {"lockfile_digest", lockfile_digest.empty() ? "none" : lockfile_digest},
          {"payload_seed", std::to_string(config.plan.payload_seed)},
          {"order_seed", std::to_string(config.plan.order_seed)},
          {"k", std::to_string(config.plan.k)},
          {"warmups", std::to_string(config.plan.warmups)},
          {"max_in_flight", std::to_string(config.plan.workflow.max_in_flight)},
          {"bootstrap_seed", std::to_string(metrics::kDefaultBootstrapSeed)},
          {"bootstrap_resamples", std::to_string(metrics::kBootstrapResamples)}};
}

int CmdRun(const RunOptions& options, std::ostream& out, std::ostream& err) {
  auto config = LoadCampaignConfig(options.config_path);
  if (!config.ok()) {
    err << "error: " << Message(config.status()) << "\n";
    return kExitUsage;
  }
  if (options.lockfile) config->lockfile = *options.lockfile;
  if (auto s = ApplyOverrides(options.overrides, *config); !s.ok()) {
    err << "error: " << Message(s) << "\n";
    return kExitUsage;
  }
  std::string lockfile_digest;
  if (!config->lockfile.empty()) {
    auto text = ReadText(config->lockfile);
    if (!text.ok()) {
      err << "error: " << Message(text.status()) << "\n";
      return kExitUsage;
    }
    auto lock = LockfileFromJson(*text);
    if (!lock.ok()) {
      err << "error: " << Message(lock.status()) << "\n";
      return kExitUsage;
    }
    lockfile_digest = LockfileDigest(*lock);
  }

  const auto plan = orchestrator::PlanOrder(config->plan.cells, config->plan.k,
                                            config->plan.order_seed);
  if (options.dry_run) {
    out << "# " << plan.size() << " measured runs over " << config->plan.cells.size()
        << " cells; k=" << config->plan.k << " warmups=" << config->plan.warmups
        << " order_seed=" << config->plan.order_seed
        << " payload_seed=" << config->plan.payload_seed << " config_hash="
        << ConfigHash(*config) << "\n";
    for (size_t i = 0; i < plan.size(); ++i) out << i << "\t" << plan[i].run_id << "\n";
    return kExitOk;
  }

  std::error_code ec;
  const std::filesystem::path out_dir = config->out_dir;
  std::filesystem::create_directories(out_dir, ec);
  const std::filesystem::path log_path = out_dir / kRecordLogName;
  if (std::filesystem::exists(log_path) && std::filesystem::file_size(log_path, ec) > 0) {
    err << "error: " << log_path.string()
        << " already holds records; choose a fresh --out directory\n";
    return kExitUsage;
  }

  std::map<std::string, std::unique_ptr<orchestrator::Backend>> owned;
  orchestrator::BackendMap backends;
  for (const auto& [name, endpoint] : config->environments) {
    auto backend = orchestrator::MakeBackend(name, endpoint);
    if (!backend.ok()) {
      err << "error: environment " << name << ": " << Message(backend.status()) << "\n";
      return backend.status().code() == absl::StatusCode::kInvalidArgument ? kExitUsage
                                                                           : kExitBackendFailure;
    }
    backends[name] = backend->get();
    owned[name] = *std::move(backend);
  }

  auto jsonl = orchestrator::JsonlRecordSink::Open(log_path.string());
  if (!jsonl.ok()) {
    err << "error: " << Message(jsonl.status()) << "\n";
    return kExitUsage;
  }
  ProgressSink sink(**jsonl, plan.size(), out);
  auto summary = orchestrator::RunPlan(backends, config->plan, sink);
  if (!summary.ok()) {
    err << "error: " << Message(summary.status()) << "\n";
    return kExitBackendFailure;
  }

  metrics::ReportContext context;
  context.provenance = CampaignProvenance(*config, lockfile_digest);
  context.expected_k = config->plan.k;
  auto unavailable = [&](const std::string& env) {
    return std::find(summary->unavailable_envs.begin(), summary->unavailable_envs.end(), env) !=
           summary->unavailable_envs.end();
  };
  bool throughput_failed = false;
  if (config->throughput) {
    for (const auto& cell : config->throughput->cells) {
      if (unavailable(cell.env)) continue;
      orchestrator::ThroughputConfig t;
      t.cell = cell;
      t.duration = config->throughput->duration;
      t.concurrency = config->throughput->concurrency;
      t.payload_seed = config->plan.payload_seed;
      t.workflow = config->plan.workflow;
      auto result = orchestrator::ThroughputRun(*backends.at(cell.env), t);
      if (!result.ok()) {
        err << "warning: throughput " << cell.Id() << ": " << Message(result.status()) << "\n";
        throughput_failed = true;
        continue;
      }
      out << "throughput " << cell.Id() << ": " << result->per_second << " workflows/s ("
          << result->completed << " completed, " << result->failed << " failed)\n";
      context.throughput.push_back(*result);
    }
  }
  for (const auto& [name, endpoint] : config->environments) {
    if (endpoint.transport != "http" || unavailable(name)) continue;
    auto sizes = FetchArtifactSizes(endpoint.endpoint);
    if (sizes.ok()) {
      context.artifact_sizes[name] = ToRows(*sizes);
    } else {
      err << "warning: artifact sizes for " << name << ": " << Message(sizes.status()) << "\n";
    }
  }
  const std::filesystem::path meta_path = out_dir / kRecordMetaName;
  if (auto s = WriteFileText(meta_path.string(), metrics::ReportContextToJson(context));
      !s.ok()) {
    err << "error: " << Message(s) << "\n";
    return kExitUsage;
  }

  out << "records: " << summary->executed << " (discarded " << summary->discarded
      << ", verification failures " << summary->verification_failures << ")\n"
      << "log: " << log_path.string() << "\nmeta: " << meta_path.string() << "\n";
  for (const std::string& env : summary->unavailable_envs) {
    err << "environment " << env << " was unavailable; its cells are flagged in the log\n";
  }
  const double discard_ratio =
      summary->executed > 0 ? static_cast<double>(summary->discarded) / summary->executed : 0.0;
  if (!summary->unavailable_envs.empty() || discard_ratio > config->max_discard_ratio ||
      throughput_failed) {
    if (discard_ratio > config->max_discard_ratio) {
      err << "discarded share " << discard_ratio << " exceeds " << config->max_discard_ratio
          << "\n";
    }
    return kExitBackendFailure;
  }
  if (summary->verification_failures > 0) return kExitVerificationFailure;
  return kExitOk;
}

int CmdAnalyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  orchestrator::ReadLogOptions read_options;
  read_options.ignore_partial_tail = options.ignore_partial;
  auto records = orchestrator::ReadRecordLog(options.log_path, read_options);
  if (!records.ok()) {
    err << "error: " << Message(records.status()) << "\n";
    return kExitUsage;
  }
  const std::filesystem::path log_path = options.log_path;
  metrics::ReportContext context;
  const std::filesystem::path meta_path =
      options.meta_path ? std::filesystem::path(*options.meta_path) : DefaultMetaPath(log_path);
  if (std::filesystem::exists(meta_path)) {
    auto text = ReadText(meta_path.string());
    if (!text.ok()) {
      err << "error: " << Message(text.status()) << "\n";
      return kExitUsage;
    }
    auto parsed = metrics::ReportContextFromJson(*text);
    if (!parsed.ok()) {
      err << "error: " << Message(parsed.status()) << "\n";
      return kExitUsage;
    }
    context = *std::move(parsed);
  } else if (options.meta_path) {
    err << "error: cannot read " << meta_path.string() << "\n";
    return kExitUsage;
  } else {
    err << "warning: no " << meta_path.filename().string()
        << " next to the log; reports carry no provenance\n";
  }
  auto bundle = metrics::BuildReports(*records, context);
  if (!bundle.ok()) {
    err << "error: " << Message(bundle.status()) << "\n";
    return kExitUsage;
  }
  const std::filesystem::path out_dir =
      options.out_dir ? std::filesystem::path(*options.out_dir) : log_path.parent_path() / "report";
  if (auto s = metrics::WriteReports(*bundle, out_dir); !s.ok()) {
    err << "error: " << Message(s) << "\n";
    return kExitUsage;
  }
  out << "wrote " << bundle->files.size() << " files to " << out_dir.string() << " (used "
      << bundle->used_records << ", discarded " << bundle->discarded_records
      << ", verification failed " << bundle->verification_failed_records << ")\n";
  for (const std::string& cell : bundle->incomplete_cells) {
    err << "warning: IncompleteCell: " << cell << " has fewer usable runs than expected\n";
  }
  return kExitOk;
}

int CmdGenPayload(const GenPayloadOptions& options, std::ostream& out, std::ostream& err) {
  Bytes bytes = payload::Generate({options.seed, options.size});
  if (options.out_path) {
    if (auto s = WriteFileBytes(*options.out_path, bytes); !s.ok()) {
      err << "error: " << Message(s) << "\n";
      return kExitUsage;
    }
  } else {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
  }
  err << "blake3 " << ToHex(Blake3Digest(bytes)) << " " << bytes.size() << " bytes (seed "
      << options.seed << ", " << payload::SizeLabelName(options.size) << ")\n";
  return kExitOk;
}

int CmdSizes(const SizesOptions& options, std::ostream& out, std::ostream& err) {
  auto entries = options.endpoint ? FetchArtifactSizes(*options.endpoint)
                                  : executor::ReportArtifactSizes(options.artifact_dir);
  if (!entries.ok()) {
    err << "error: " << Message(entries.status()) << "\n";
    if (HasErrorKind(entries.status(), error_kind::kMissingArtifact)) {
      err << "hint: run `bench build --aot` to produce the precompiled objects\n";
      return kExitUsage;
    }
    return kExitBackendFailure;
  }
  if (options.json) {
    out << executor::ArtifactSizesJson(*entries) << "\n";
  } else {
    out << FormatSizeTable(*entries);
  }
  return kExitOk;
}

}  // namespace wasmflow::cli
