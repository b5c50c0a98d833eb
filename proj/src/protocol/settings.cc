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

#include "wasmflow/protocol/settings.h"

#include <string>

namespace wasmflow::protocol {

std::string_view CompileModeName(CompileMode mode) {
  return mode == CompileMode::kJit ? "jit" : "aot";
}

absl::StatusOr<CompileMode> ParseCompileMode(std::string_view name) {
  if (name == "jit") return CompileMode::kJit;
  if (name == "aot") return CompileMode::kAot;
  return absl::InvalidArgumentError("unknown mode '" + std::string(name) + "' (jit|aot)");
}

std::string_view StatePolicyName(StatePolicy policy) {
  return policy == StatePolicy::kColdOneShot ? "cold" : "warm";
}

absl::StatusOr<StatePolicy> ParseStatePolicy(std::string_view name) {
  if (name == "cold" || name == "cold_oneshot") return StatePolicy::kColdOneShot;
  if (name == "warm" || name == "warm_pool") return StatePolicy::kWarmPool;
  return absl::InvalidArgumentError("unknown state '" + std::string(name) + "' (cold|warm)");
}

}  // namespace wasmflow::protocol
