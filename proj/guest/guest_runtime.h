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

// Guest-side ABI shared by every step module.
//
// Exports:
//   init() -> i32                 resets the arena; called once per instance
//   frame_alloc(len) -> ptr       resets the arena, returns room for a frame
//   run(ptr, len) -> i64          handles an InvokeFrame; returns the
//                                 ResultFrame location as (ptr << 32) | len
//   memory
//
// The module imports nothing; all data moves through linear memory.

#ifndef WASMFLOW_GUEST_GUEST_RUNTIME_H_
#define WASMFLOW_GUEST_GUEST_RUNTIME_H_

#include <stddef.h>
#include <stdint.h>

#include "wasmflow/kernels/steps.h"

extern "C" unsigned char __heap_base;

extern "C" {
// Lowered to memory.copy / memory.fill with bulk-memory enabled.
void* memcpy(void* dst, const void* src, size_t n) {
  __builtin_memcpy(dst, src, n);
  return dst;
}
void* memmove(void* dst, const void* src, size_t n) {
  __builtin_memmove(dst, src, n);
  return dst;
}
void* memset(void* dst, int c, size_t n) {
  __builtin_memset(dst, c, n);
  return dst;
}
}

namespace wasmflow::guest {

inline constexpr size_t kPageSize = 65536;
inline constexpr uintptr_t kAlign = 16;

// Bump allocator over linear memory above __heap_base. Memory grows on demand
// and is reused, never returned, across invocations of a warm instance.
class LinearArena {
 public:
  void Reset() {
    uintptr_t base = reinterpret_cast<uintptr_t>(&__heap_base);
    top_ = (base + kAlign - 1) & ~(kAlign - 1);
  }

  uint8_t* Allocate(size_t n) {
    if (top_ == 0) Reset();
    uintptr_t start = top_;
    uintptr_t end = (start + n + kAlign - 1) & ~(kAlign - 1);
    if (end < start) return nullptr;
    size_t have = __builtin_wasm_memory_size(0) * kPageSize;
    if (end > have) {
      size_t pages = (end - have + kPageSize - 1) / kPageSize;
      if (__builtin_wasm_memory_grow(0, pages) == static_cast<size_t>(-1)) {
        return nullptr;
      }
    }
    top_ = end;
    return reinterpret_cast<uint8_t*>(start);
  }

 private:
  uintptr_t top_ = 0;
};

inline LinearArena& Arena() {
  static LinearArena arena;
  return arena;
}

}  // namespace wasmflow::guest

#define WASMFLOW_DEFINE_STEP_MODULE(KIND)                                     \
  extern "C" __attribute__((export_name("init"))) int32_t wasmflow_init() {    \
    ::wasmflow::guest::Arena().Reset();                                        \
    return 0;                                                                  \
  }                                                                            \
  extern "C" __attribute__((export_name("frame_alloc"))) uint8_t*              \
  wasmflow_frame_alloc(uint32_t len) {                                         \
    ::wasmflow::guest::Arena().Reset();                                        \
    uint8_t* p = ::wasmflow::guest::Arena().Allocate(len);                     \
    if (p == nullptr) __builtin_trap();                                        \
    return p;                                                                  \
  }                                                                            \
  extern "C" __attribute__((export_name("run"))) uint64_t wasmflow_run(        \
      const uint8_t* ptr, uint32_t len) {                                      \
    ::wasmflow::kernels::cbor::Bytes in{ptr, len};                             \
    ::wasmflow::kernels::StepResult r =                                        \
        ::wasmflow::kernels::HandleInvoke<KIND>(in, ::wasmflow::guest::Arena()); \
    if (r.output.data == nullptr) __builtin_trap();                            \
    return (static_cast<uint64_t>(reinterpret_cast<uintptr_t>(r.output.data))  \
            << 32) |                                                           \
           static_cast<uint64_t>(r.output.size);                               \
  }

#endif  // WASMFLOW_GUEST_GUEST_RUNTIME_H_
