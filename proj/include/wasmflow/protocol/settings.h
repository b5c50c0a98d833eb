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

// Invocation settings shared by executors and the orchestrator.

#ifndef WASMFLOW_PROTOCOL_SETTINGS_H_
#define WASMFLOW_PROTOCOL_SETTINGS_H_

#include <cstdint>
#include <string_view>

#include "absl/status/statusor.h"

namespace wasmflow::protocol {

enum class CompileMode : uint8_t { kJit, kAot };
enum class StatePolicy : uint8_t { kColdOneShot, kWarmPool };

std::string_view CompileModeName(CompileMode mode);  // "jit" | "aot"
absl::StatusOr<CompileMode> ParseCompileMode(std::string_view name);
std::string_view StatePolicyName(StatePolicy policy);  // "cold" | "warm"
// Accepts "cold"/"cold_oneshot" and "warm"/"warm_pool".
absl::StatusOr<StatePolicy> ParseStatePolicy(std::string_view name);

}  // namespace wasmflow::protocol

#endif  // WASMFLOW_PROTOCOL_SETTINGS_H_
