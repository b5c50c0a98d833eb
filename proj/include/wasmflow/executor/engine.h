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

// Host-engine abstraction. Any embeddable wasm32 engine that can compile,
// optionally precompile, instantiate and call exported functions can back the
// executor. Guests follow the frame ABI:
//
//   init() -> i32                 one-time initialization, 0 on success
//   frame_alloc(len: i32) -> i32  reserves `len` bytes of linear memory
//   run(ptr: i32, len: i32) -> i64
//                                 consumes an InvokeFrame, returns a packed
//                                 (ptr << 32 | len) ResultFrame location
//   memory                        the exported linear memory

#ifndef WASMFLOW_EXECUTOR_ENGINE_H_
#define WASMFLOW_EXECUTOR_ENGINE_H_

#include <chrono>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "wasmflow/common/util.h"

namespace wasmflow::executor {

// Engine-specific compiled code; shareable across instances and threads.
class CompiledModule {
 public:
  virtual ~CompiledModule() = default;
};

// One instantiated guest. Not thread-safe; callers serialize access.
class EngineInstance {
 public:
  virtual ~EngineInstance() = default;

  // Runs the exported `init`. StepTrap or Timeout on failure.
  virtual absl::Status Init() = 0;

  // Copies `frame` into guest memory, runs it and copies the result frame out.
  // StepTrap on a guest fault, Timeout when the deadline elapses.
  virtual absl::StatusOr<Bytes> Call(ByteSpan frame) = 0;
};

class HostEngine {
 public:
  virtual ~HostEngine() = default;

  virtual std::string Name() const = 0;
  virtual std::string Version() const = 0;

  // JIT path: validates and compiles a wasm binary. InvalidModule on failure.
  virtual absl::StatusOr<std::shared_ptr<const CompiledModule>> Compile(ByteSpan wasm) = 0;

  // Produces an engine-native precompiled object for `wasm`.
  virtual absl::StatusOr<Bytes> Precompile(ByteSpan wasm) = 0;

  // AOT path: loads an object produced by Precompile of the same engine
  // build. InvalidModule when the object is rejected.
  virtual absl::StatusOr<std::shared_ptr<const CompiledModule>> LoadPrecompiled(
      ByteSpan object) = 0;

  // Creates a fresh isolated instance (new store and linker).
  virtual absl::StatusOr<std::unique_ptr<EngineInstance>> Instantiate(
      std::shared_ptr<const CompiledModule> module) = 0;
};

struct EngineOptions {
  // Upper bound for a single guest call.
  std::chrono::milliseconds timeout{120000};
};

// EngineUnavailable when the engine cannot be created.
absl::StatusOr<std::unique_ptr<HostEngine>> MakeWasmtimeEngine(const EngineOptions& options = {});

}  // namespace wasmflow::executor

#endif  // WASMFLOW_EXECUTOR_ENGINE_H_
