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

#ifndef WASMFLOW_COMMON_UTIL_H_
#define WASMFLOW_COMMON_UTIL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace wasmflow {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;
using Digest256 = std::array<uint8_t, 32>;

// Microseconds on CLOCK_MONOTONIC. System-wide on Linux, so timestamps taken
// in the orchestrator and in an executor process on the same host compare.
int64_t MonotonicMicros();

// Uniform integer in [0, bound) by rejection sampling, so sequences are
// identical across standard library implementations. bound must be > 0.
uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound);

std::string ToHex(ByteSpan bytes);
std::optional<Bytes> FromHex(std::string_view hex);
std::optional<Digest256> DigestFromHex(std::string_view hex);

Digest256 Blake3Digest(ByteSpan bytes);

absl::StatusOr<Bytes> ReadFileBytes(const std::string& path);
absl::Status WriteFileBytes(const std::string& path, ByteSpan bytes);
absl::Status WriteFileText(const std::string& path, std::string_view text);

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}
inline std::string_view AsChars(ByteSpan b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

}  // namespace wasmflow

#endif  // WASMFLOW_COMMON_UTIL_H_
