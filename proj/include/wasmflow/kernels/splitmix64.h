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

// Freestanding: compiled into the wasm guests as well as the host.

#ifndef WASMFLOW_KERNELS_SPLITMIX64_H_
#define WASMFLOW_KERNELS_SPLITMIX64_H_

#include <stddef.h>
#include <stdint.h>

namespace wasmflow::kernels {

// Counter-based SplitMix64. The state is the seed plus a Weyl increment per
// step, so a stream is fully determined by its seed.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(uint64_t seed) : state_(seed) {}

  constexpr uint64_t Next() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// Fills `out` with the little-endian serialization of the stream. A trailing
// partial word takes the low-order bytes of the next output.
inline void FillSplitMix64(uint64_t seed, uint8_t* out, size_t size) {
  SplitMix64 rng(seed);
  size_t i = 0;
  for (; i + 8 <= size; i += 8) {
    uint64_t v = rng.Next();
    for (int b = 0; b < 8; ++b) out[i + b] = static_cast<uint8_t>(v >> (8 * b));
  }
  if (i < size) {
    uint64_t v = rng.Next();
    for (size_t b = 0; i + b < size; ++b) {
      out[i + b] = static_cast<uint8_t>(v >> (8 * b));
    }
  }
}

}  // namespace wasmflow::kernels

#endif  // WASMFLOW_KERNELS_SPLITMIX64_H_
