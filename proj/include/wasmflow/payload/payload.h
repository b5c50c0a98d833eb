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

// Deterministic synthetic payloads in three size classes.

#ifndef WASMFLOW_PAYLOAD_PAYLOAD_H_
#define WASMFLOW_PAYLOAD_PAYLOAD_H_

#include <array>
#include <cstdint>
#include <string_view>

#include "absl/status/statusor.h"
#include "wasmflow/common/util.h"

namespace wasmflow::payload {

enum class SizeLabel : uint8_t { kSmall, kMedium, kLarge };

inline constexpr std::array<SizeLabel, 3> kAllSizes = {
    SizeLabel::kSmall, SizeLabel::kMedium, SizeLabel::kLarge};

struct SizeClass {
  SizeLabel label;
  uint64_t byte_size;
};

constexpr SizeClass SizeClassOf(SizeLabel label) {
  switch (label) {
    case SizeLabel::kSmall:
      return {label, 16384};
    case SizeLabel::kMedium:
      return {label, 1048576};
    case SizeLabel::kLarge:
      return {label, 4194304};
  }
  return {label, 0};
}

std::string_view SizeLabelName(SizeLabel label);
absl::StatusOr<SizeLabel> ParseSizeLabel(std::string_view name);

inline constexpr uint64_t kDefaultSeed = 42;

struct PayloadSpec {
  uint64_t seed = kDefaultSeed;
  SizeLabel size = SizeLabel::kSmall;
};

// Little-endian SplitMix64 stream of exactly SizeClassOf(spec.size).byte_size
// bytes. A pure function of `spec`.
Bytes Generate(const PayloadSpec& spec);

}  // namespace wasmflow::payload

#endif  // WASMFLOW_PAYLOAD_PAYLOAD_H_
