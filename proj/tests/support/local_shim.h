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

// An executor shim serving copies of the built step modules on a free
// loopback port, for tests that need a real wasm backend.

#ifndef WASMFLOW_TESTS_SUPPORT_LOCAL_SHIM_H_
#define WASMFLOW_TESTS_SUPPORT_LOCAL_SHIM_H_

#include <filesystem>
#include <memory>
#include <string>

#include "support/temp_dir.h"
#include "wasmflow/common/errors.h"
#include "wasmflow/executor/artifacts.h"
#include "wasmflow/executor/executor.h"
#include "wasmflow/executor/shim_server.h"

namespace wasmflow::test {

class LocalShim {
 public:
  // Copies the artifacts, precompiles AOT objects and starts serving.
  static absl::StatusOr<std::unique_ptr<LocalShim>> Start(int pool_size = 1) {
    auto shim = std::unique_ptr<LocalShim>(new LocalShim());
    for (protocol::StepKind kind : executor::kAllStepKinds) {
      std::error_code ec;
      std::filesystem::copy_file(executor::WasmPath(WASMFLOW_TEST_ARTIFACT_DIR, kind),
                                 executor::WasmPath(shim->dir_.path(), kind), ec);
      if (ec) return absl::InternalError("copying artifacts: " + ec.message());
    }
    executor::ExecutorConfig config;
    config.artifact_dir = shim->dir_.path();
    config.pool_size = pool_size;
    auto engine = executor::MakeWasmtimeEngine();
    if (!engine.ok()) return engine.status();
    auto exec = executor::Executor::Create(config, *std::move(engine));
    if (!exec.ok()) return exec.status();
    shim->executor_ = *std::move(exec);
    if (auto objects = shim->executor_->PrecompileAll(); !objects.ok()) return objects.status();
    shim->server_ = std::make_unique<executor::ShimServer>(*shim->executor_);
    auto port = shim->server_->Start("127.0.0.1", 0);
    if (!port.ok()) return port.status();
    shim->base_url_ = "http://127.0.0.1:" + std::to_string(*port);
    return shim;
  }

  ~LocalShim() {
    if (server_) server_->Stop();
  }

  const std::string& base_url() const { return base_url_; }
  const std::filesystem::path& artifact_dir() const { return dir_.path(); }
  executor::Executor& executor() { return *executor_; }

 private:
  LocalShim() = default;

  TempDir dir_;
  std::unique_ptr<executor::Executor> executor_;
  std::unique_ptr<executor::ShimServer> server_;
  std::string base_url_;
};

}  // namespace wasmflow::test

#endif  // WASMFLOW_TESTS_SUPPORT_LOCAL_SHIM_H_
