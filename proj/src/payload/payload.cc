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

#include "wasmflow/payload/payload.h"

#include <string>

#include "absl/status/status.h"
#include "wasmflow/kernels/splitmix64.h"

namespace wasmflow::payload {

std::string_view SizeLabelName(SizeLabel label) {
  switch (label) {
    case SizeLabel::kSmall:
      return "small";
    case SizeLabel::kMedium:
      return "medium";
    case SizeLabel::kLarge:
      return "large";
  }
  return "unknown";
}

absl::StatusOr<SizeLabel> ParseSizeLabel(std::string_view name) {
  for (SizeLabel label : kAllSizes) {
    if (SizeLabelName(label) == name) return label;
  }
  return absl::InvalidArgumentError(
      "unknown payload size class '" + std::string(name) + "' (small|medium|large)");
}

Bytes Generate(const PayloadSpec& spec) {
  Bytes out(SizeClassOf(spec.size).byte_size);
  kernels::FillSplitMix64(spec.seed, out.data(), out.size());
  return out;
}

}  // namespace wasmflow::payload
