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

#include "wasmflow/cli/lockfile.h"

#include <cstdio>
#include <iterator>

#include "json.hpp"
#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"

namespace wasmflow::cli {
namespace {

using Json = nlohmann::ordered_json;
using executor::kAllStepKinds;

absl::Status BuildFailed(std::string_view detail) {
  return MakeError(absl::StatusCode::kFailedPrecondition, error_kind::kBuildFailed, detail);
}

absl::StatusOr<PinnedArtifact> Pin(protocol::StepKind kind, const std::filesystem::path& path) {
  auto bytes = ReadFileBytes(path.string());
  if (!bytes.ok()) return BuildFailed("cannot read " + path.string());
  return PinnedArtifact{protocol::StepKindName(kind), path.filename().string(), bytes->size(),
                        ToHex(Blake3Digest(*bytes))};
}

Json PinsJson(const std::vector<PinnedArtifact>& pins) {
  Json list = Json::array();
  for (const PinnedArtifact& p : pins) {
    list.push_back({{"step", p.step}, {"file", p.file}, {"bytes", p.bytes}, {"blake3", p.blake3}});
  }
  return list;
}

std::vector<PinnedArtifact> PinsFromJson(const Json& list) {
  std::vector<PinnedArtifact> pins;
  for (const Json& p : list) {
    pins.push_back({p.at("step").get<std::string>(), p.at("file").get<std::string>(),
                    p.at("bytes").get<uint64_t>(), p.at("blake3").get<std::string>()});
  }
  return pins;
}

absl::Status VerifyPins(const std::vector<PinnedArtifact>& pins,
                        const std::filesystem::path& dir) {
  for (const PinnedArtifact& pin : pins) {
    auto bytes = ReadFileBytes((dir / pin.file).string());
    if (!bytes.ok()) return BuildFailed("pinned artifact " + pin.file + " is missing");
    if (ToHex(Blake3Digest(*bytes)) != pin.blake3) {
      return BuildFailed("artifact " + pin.file + " does not match the lockfile");
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Lockfile> BuildLockfile(const std::filesystem::path& artifact_dir,
                                       executor::HostEngine* engine) {
  Lockfile lock;
  for (protocol::StepKind kind : kAllStepKinds) {
    auto pin = Pin(kind, executor::WasmPath(artifact_dir, kind));
    if (!pin.ok()) return pin.status();
    lock.wasm.push_back(*pin);
  }
  if (engine == nullptr) return lock;
  lock.engine = engine->Name() + " " + engine->Version();
  for (size_t i = 0; i < std::size(kAllStepKinds); ++i) {
    const protocol::StepKind kind = kAllStepKinds[i];
    auto object = executor::PrecompileAot(*engine, executor::WasmPath(artifact_dir, kind));
    if (!object.ok()) {
      return BuildFailed("precompiling " + protocol::StepKindName(kind) + ": " +
                         std::string(object.status().message().data(),
                                     object.status().message().size()));
    }
    auto pin = Pin(kind, object->object);
    if (!pin.ok()) return pin.status();
    lock.aot.push_back(*pin);
    lock.sizes.push_back(executor::MakeSizeEntry(kind, lock.wasm[i].bytes, pin->bytes));
  }
  return lock;
}

std::string LockfileToJson(const Lockfile& lock) {
  Json j = {{"format", 1}, {"wasm", PinsJson(lock.wasm)}};
  if (!lock.aot.empty()) {
    j["engine"] = lock.engine;
    j["aot"] = PinsJson(lock.aot);
    Json sizes = Json::array();
    for (const auto& e : lock.sizes) {
      sizes.push_back({{"step", protocol::StepKindName(e.step)},
                       {"wasm_bytes", e.wasm_bytes},
                       {"aot_bytes", e.aot_bytes},
                       {"pct_increase", e.pct_increase}});
    }
    j["sizes"] = std::move(sizes);
  }
  return j.dump(2) + "\n";
}

absl::StatusOr<Lockfile> LockfileFromJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("lockfile is not a JSON object");
  }
  try {
    Lockfile lock;
    lock.wasm = PinsFromJson(j.at("wasm"));
    if (j.contains("aot")) {
      lock.engine = j.at("engine").get<std::string>();
      lock.aot = PinsFromJson(j.at("aot"));
      for (const Json& e : j.at("sizes")) {
        auto kind = protocol::ParseStepKindName(e.at("step").get<std::string>());
        if (!kind) return absl::InvalidArgumentError("lockfile: bad size entry step");
        lock.sizes.push_back({*kind, e.at("wasm_bytes").get<uint64_t>(),
                              e.at("aot_bytes").get<uint64_t>(),
                              e.at("pct_increase").get<int64_t>()});
      }
    }
    return lock;
  } catch (const Json::exception& e) {
    // The JSON library reports missing keys and type errors by exception.
    return absl::InvalidArgumentError(std::string("lockfile: ") + e.what());
  }
}

std::string LockfileDigest(const Lockfile& lockfile) {
  return ToHex(Blake3Digest(AsBytes(LockfileToJson(lockfile))));
}

absl::Status VerifyAgainstLockfile(const Lockfile& lockfile,
                                   const std::filesystem::path& artifact_dir) {
  if (auto s = VerifyPins(lockfile.wasm, artifact_dir); !s.ok()) return s;
  return VerifyPins(lockfile.aot, artifact_dir);
}

std::string FormatSizeTable(const std::vector<executor::ArtifactSizeEntry>& entries) {
  std::string out = "step  wasm_mb  aot_mb  increase\n";
  char line[96];
  for (const auto& e : entries) {
    std::snprintf(line, sizeof(line), "%-4s  %7.3f  %6.3f  %s%lld%%\n",
                  protocol::StepKindName(e.step).c_str(), static_cast<double>(e.wasm_bytes) / 1e6,
                  static_cast<double>(e.aot_bytes) / 1e6, e.pct_increase >= 0 ? "+" : "",
                  static_cast<long long>(e.pct_increase));
    out += line;
  }
  return out;
}

}  // namespace wasmflow::cli
