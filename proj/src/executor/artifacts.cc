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

#include "wasmflow/executor/artifacts.h"

#include <system_error>

#include "wasmflow/common/errors.h"
#include "wasmflow/common/util.h"

namespace wasmflow::executor {
namespace {

absl::Status Missing(const std::filesystem::path& path) {
  return MakeError(absl::StatusCode::kNotFound, error_kind::kMissingArtifact, path.string());
}

std::filesystem::path KeyPath(const std::filesystem::path& object) {
  std::filesystem::path key = object;
  key += ".key";
  return key;
}

absl::StatusOr<uint64_t> FileSize(const std::filesystem::path& path) {
  std::error_code ec;
  uint64_t size = std::filesystem::file_size(path, ec);
  if (ec) return Missing(path);
  return size;
}

}  // namespace

std::string ModuleStem(StepKind kind) {
  return "step" + std::to_string(static_cast<int>(kind));
}

std::filesystem::path WasmPath(const std::filesystem::path& dir, StepKind kind) {
  return dir / (ModuleStem(kind) + ".wasm");
}

std::filesystem::path AotPath(const std::filesystem::path& dir, StepKind kind) {
  return dir / (ModuleStem(kind) + ".cwasm");
}

absl::StatusOr<PrecompileResult> PrecompileAot(HostEngine& engine,
                                               const std::filesystem::path& wasm_artifact) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(wasm_artifact, ec)) return Missing(wasm_artifact);
  auto wasm = ReadFileBytes(wasm_artifact.string());
  if (!wasm.ok()) return Missing(wasm_artifact);

  PrecompileResult result;
  result.object = wasm_artifact;
  result.object.replace_extension(".cwasm");
  std::string key = ToHex(Blake3Digest(*wasm)) + " " + engine.Name() + " " + engine.Version() +
                    "\n";
  auto existing_key = ReadFileBytes(KeyPath(result.object).string());
  if (existing_key.ok() && std::filesystem::is_regular_file(result.object, ec) &&
      std::string(existing_key->begin(), existing_key->end()) == key) {
    result.cache_hit = true;
    return result;
  }

  auto object = engine.Precompile(*wasm);
  if (!object.ok()) return object.status();
  // Write to a temporary name and rename so readers never see partial files.
  std::filesystem::path tmp = result.object;
  tmp += ".tmp";
  if (auto s = WriteFileBytes(tmp.string(), *object); !s.ok()) return s;
  std::filesystem::rename(tmp, result.object, ec);
  if (ec) return absl::InternalError("rename " + tmp.string() + ": " + ec.message());
  if (auto s = WriteFileText(KeyPath(result.object).string(), key); !s.ok()) return s;
  return result;
}

int64_t PercentIncrease(uint64_t wasm_bytes, uint64_t aot_bytes) {
  // Exact integer arithmetic: floating point misrounds exact halves.
  __int128 num = 100 * (static_cast<__int128>(aot_bytes) - static_cast<__int128>(wasm_bytes));
  __int128 den = wasm_bytes;
  __int128 half_up = num >= 0 ? (2 * num + den) / (2 * den) : -((-2 * num + den) / (2 * den));
  return static_cast<int64_t>(half_up);
}

ArtifactSizeEntry MakeSizeEntry(StepKind step, uint64_t wasm_bytes, uint64_t aot_bytes) {
  return ArtifactSizeEntry{step, wasm_bytes, aot_bytes, PercentIncrease(wasm_bytes, aot_bytes)};
}

absl::StatusOr<std::vector<ArtifactSizeEntry>> ReportArtifactSizes(
    const std::filesystem::path& dir) {
  std::vector<ArtifactSizeEntry> entries;
  for (StepKind kind : kAllStepKinds) {
    auto wasm = FileSize(WasmPath(dir, kind));
    if (!wasm.ok()) return wasm.status();
    auto aot = FileSize(AotPath(dir, kind));
    if (!aot.ok()) return aot.status();
    if (*wasm == 0) {
      return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kInvalidModule,
                       WasmPath(dir, kind).string() + " is empty");
    }
    entries.push_back(MakeSizeEntry(kind, *wasm, *aot));
  }
  return entries;
}

}  // namespace wasmflow::executor
