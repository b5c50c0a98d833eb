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

#ifndef WASMFLOW_KERNELS_CRC32_H_
#define WASMFLOW_KERNELS_CRC32_H_

#include <stddef.h>
#include <stdint.h>

namespace wasmflow::kernels {

// CRC-32/IEEE: reflected polynomial 0xEDB88320, init and final XOR 0xFFFFFFFF.
namespace crc32_internal {

struct Table {
  uint32_t entries[256];
};

constexpr Table MakeTable() {
  Table t{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
    t.entries[i] = c;
  }
  return t;
}

inline constexpr Table kTable = MakeTable();

}  // namespace crc32_internal

// Streaming form; start from 0 and feed the previous result back in.
inline uint32_t Crc32Update(uint32_t crc, const uint8_t* data, size_t size) {
  uint32_t c = crc ^ 0xFFFFFFFFu;
  for (size_t i = 0; i < size; ++i) {
    c = crc32_internal::kTable.entries[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
  }
  return c ^ 0xFFFFFFFFu;
}

inline uint32_t Crc32(const uint8_t* data, size_t size) {
  return Crc32Update(0, data, size);
}

}  // namespace wasmflow::kernels

#endif  // WASMFLOW_KERNELS_CRC32_H_
