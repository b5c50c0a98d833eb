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

#include <condition_variable>
#include <cstring>
#include <mutex>
#include <thread>
#include <tuple>
#include <utility>

#include "wasmflow/common/errors.h"
#include "wasmflow/executor/engine.h"
#include "wasmtime.h"
#include "wasmtime.hh"

namespace wasmflow::executor {
namespace {

// Epoch granularity for the call deadline.
constexpr std::chrono::milliseconds kEpochTick{10};

absl::Status InvalidModule(std::string_view detail) {
  return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kInvalidModule, detail);
}

absl::Status Trapped(std::string_view detail) {
  return MakeError(absl::StatusCode::kInternal, error_kind::kStepTrap, detail);
}

absl::Status FromTrapError(const wasmtime::TrapError& e) {
  if (const auto* trap = std::get_if<wasmtime::Trap>(&e.data)) {
    std::optional<wasmtime_trap_code_t> code = trap->code();
    if (code && *code == WASMTIME_TRAP_CODE_INTERRUPT) {
      return MakeError(absl::StatusCode::kDeadlineExceeded, error_kind::kTimeout,
                       "guest exceeded the call deadline");
    }
  }
  return Trapped(e.message());
}

wasmtime::Span<uint8_t> MutableSpan(ByteSpan bytes) {
  // The engine API takes a mutable span but only reads from it.
  return wasmtime::Span<uint8_t>(const_cast<uint8_t*>(bytes.data()), bytes.size());
}

class WasmtimeModule : public CompiledModule {
 public:
  explicit WasmtimeModule(wasmtime::Module module) : module_(std::move(module)) {}
  const wasmtime::Module& module() const { return module_; }

 private:
  wasmtime::Module module_;
};

class WasmtimeInstance : public EngineInstance {
 public:
  using InitFn = wasmtime::TypedFunc<std::tuple<>, int32_t>;
  using AllocFn = wasmtime::TypedFunc<uint32_t, uint32_t>;
  using RunFn = wasmtime::TypedFunc<std::tuple<uint32_t, uint32_t>, uint64_t>;

  WasmtimeInstance(std::unique_ptr<wasmtime::Store> store, wasmtime::Memory memory, InitFn init,
                   AllocFn alloc, RunFn run, uint64_t deadline_ticks)
      : store_(std::move(store)),
        memory_(memory),
        init_(init),
        alloc_(alloc),
        run_(run),
        deadline_ticks_(deadline_ticks) {}

  absl::Status Init() override {
    store_->context().set_epoch_deadline(deadline_ticks_);
    auto rc = init_.call(store_->context(), std::tuple<>());
    if (!rc) return FromTrapError(rc.err());
    if (rc.ok() != 0) return Trapped("init returned " + std::to_string(rc.ok()));
    return absl::OkStatus();
  }

  absl::StatusOr<Bytes> Call(ByteSpan frame) override {
    if (frame.size() > UINT32_MAX) return Trapped("frame exceeds the 32-bit address space");
    wasmtime::Store::Context cx = store_->context();
    cx.set_epoch_deadline(deadline_ticks_);
    uint32_t len = static_cast<uint32_t>(frame.size());
    auto ptr = alloc_.call(cx, len);
    if (!ptr) return FromTrapError(ptr.err());
    uint32_t in_ptr = ptr.ok();
    {
      wasmtime::Span<uint8_t> mem = memory_.data(cx);
      if (static_cast<uint64_t>(in_ptr) + len > mem.size()) {
        return Trapped("frame_alloc returned an out-of-bounds region");
      }
      if (len > 0) std::memcpy(mem.data() + in_ptr, frame.data(), len);
    }
    auto packed = run_.call(cx, std::make_tuple(in_ptr, len));
    if (!packed) return FromTrapError(packed.err());
    uint64_t out_ptr = packed.ok() >> 32;
    uint64_t out_len = packed.ok() & 0xFFFFFFFFu;
    wasmtime::Span<uint8_t> mem = memory_.data(cx);
    if (out_ptr + out_len > mem.size()) return Trapped("run returned an out-of-bounds result");
    return Bytes(mem.data() + out_ptr, mem.data() + out_ptr + out_len);
  }

 private:
  std::unique_ptr<wasmtime::Store> store_;
  wasmtime::Memory memory_;
  InitFn init_;
  AllocFn alloc_;
  RunFn run_;
  uint64_t deadline_ticks_;
};

wasmtime::Config MakeConfig() {
  wasmtime::Config config;
  config.epoch_interruption(true);
  return config;
}

class WasmtimeEngine : public HostEngine {
 public:
  explicit WasmtimeEngine(const EngineOptions& options)
      : engine_(MakeConfig()),
        deadline_ticks_(static_cast<uint64_t>(options.timeout / kEpochTick) + 1),
        ticker_([this] { Tick(); }) {}

  ~WasmtimeEngine() override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stopping_ = true;
    }
    cv_.notify_all();
    ticker_.join();
  }

  std::string Name() const override { return "wasmtime"; }
  std::string Version() const override { return WASMTIME_VERSION; }

  absl::StatusOr<std::shared_ptr<const CompiledModule>> Compile(ByteSpan wasm) override {
    auto module = wasmtime::Module::compile(engine_, MutableSpan(wasm));
    if (!module) return InvalidModule(module.err().message());
    return std::make_shared<WasmtimeModule>(module.ok());
  }

  absl::StatusOr<Bytes> Precompile(ByteSpan wasm) override {
    auto module = wasmtime::Module::compile(engine_, MutableSpan(wasm));
    if (!module) return InvalidModule(module.err().message());
    auto object = module.ok_ref().serialize();
    if (!object) return InvalidModule(object.err().message());
    return object.ok();
  }

  absl::StatusOr<std::shared_ptr<const CompiledModule>> LoadPrecompiled(ByteSpan object) override {
    auto module = wasmtime::Module::deserialize(engine_, MutableSpan(object));
    if (!module) return InvalidModule(module.err().message());
    return std::make_shared<WasmtimeModule>(module.ok());
  }

  absl::StatusOr<std::unique_ptr<EngineInstance>> Instantiate(
      std::shared_ptr<const CompiledModule> compiled) override {
    const auto* module = dynamic_cast<const WasmtimeModule*>(compiled.get());
    if (module == nullptr) return InvalidModule("module was compiled by a different engine");

    auto store = std::make_unique<wasmtime::Store>(engine_);
    wasmtime::Store::Context cx = store->context();
    cx.set_epoch_deadline(deadline_ticks_);
    if (auto r = cx.set_wasi(wasmtime::WasiConfig()); !r) return Trapped(r.err().message());
    wasmtime::Linker linker(engine_);
    if (auto r = linker.define_wasi(); !r) return Trapped(r.err().message());
    auto instance = linker.instantiate(cx, module->module());
    if (!instance) return FromTrapError(instance.err());

    auto memory = instance.ok_ref().get(cx, "memory");
    const wasmtime::Memory* mem = memory ? std::get_if<wasmtime::Memory>(&*memory) : nullptr;
    if (mem == nullptr) return InvalidModule("guest does not export `memory`");

    auto func = [&](std::string_view name) -> std::optional<wasmtime::Func> {
      auto ext = instance.ok_ref().get(cx, name);
      if (!ext) return std::nullopt;
      if (const auto* f = std::get_if<wasmtime::Func>(&*ext)) return *f;
      return std::nullopt;
    };
    auto init = func("init");
    auto alloc = func("frame_alloc");
    auto run = func("run");
    if (!init || !alloc || !run) {
      return InvalidModule("guest must export init, frame_alloc and run");
    }
    auto init_t = init->typed<std::tuple<>, int32_t>(cx);
    auto alloc_t = alloc->typed<uint32_t, uint32_t>(cx);
    auto run_t = run->typed<std::tuple<uint32_t, uint32_t>, uint64_t>(cx);
    if (!init_t || !alloc_t || !run_t) return InvalidModule("guest export signatures mismatch");
    return std::unique_ptr<EngineInstance>(
        new WasmtimeInstance(std::move(store), *mem, init_t.ok(), alloc_t.ok(), run_t.ok(),
                             deadline_ticks_));
  }

 private:
  void Tick() {
    std::unique_lock<std::mutex> lock(mu_);
    while (!cv_.wait_for(lock, kEpochTick, [this] { return stopping_; })) {
      engine_.increment_epoch();
    }
  }

  wasmtime::Engine engine_;
  uint64_t deadline_ticks_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread ticker_;
};

}  // namespace

absl::StatusOr<std::unique_ptr<HostEngine>> MakeWasmtimeEngine(const EngineOptions& options) {
  if (options.timeout <= std::chrono::milliseconds::zero()) {
    return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kEngineUnavailable,
                     "timeout must be positive");
  }
  return std::unique_ptr<HostEngine>(new WasmtimeEngine(options));
}

}  // namespace wasmflow::executor
