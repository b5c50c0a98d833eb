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

// Named error kinds on top of absl::Status. The kind is the message prefix
// "<Kind>: ", so it survives logging and crossing process boundaries.

#ifndef WASMFLOW_COMMON_ERRORS_H_
#define WASMFLOW_COMMON_ERRORS_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"

namespace wasmflow {

namespace error_kind {
inline constexpr std::string_view kMalformedFrame = "MalformedFrame";
inline constexpr std::string_view kChecksumMismatch = "ChecksumMismatch";
inline constexpr std::string_view kLengthNotDivisible = "LengthNotDivisible";
inline constexpr std::string_view kDimensionMismatch = "DimensionMismatch";
inline constexpr std::string_view kIncompleteFanIn = "IncompleteFanIn";
inline constexpr std::string_view kDigestMismatch = "DigestMismatch";
inline constexpr std::string_view kUnknownStep = "UnknownStep";
inline constexpr std::string_view kPayloadDigestMismatch = "PayloadDigestMismatch";
inline constexpr std::string_view kStepTrap = "StepTrap";
inline constexpr std::string_view kTimeout = "Timeout";
inline constexpr std::string_view kPoolExhausted = "PoolExhausted";
inline constexpr std::string_view kInvalidModule = "InvalidModule";
inline constexpr std::string_view kEngineUnavailable = "EngineUnavailable";
inline constexpr std::string_view kMissingArtifact = "MissingArtifact";
inline constexpr std::string_view kSamplerUnavailable = "SamplerUnavailable";
inline constexpr std::string_view kStepFailed = "StepFailed";
inline constexpr std::string_view kVerificationFailed = "VerificationFailed";
inline constexpr std::string_view kBackendUnavailable = "BackendUnavailable";
inline constexpr std::string_view kEmptyInput = "EmptyInput";
inline constexpr std::string_view kIncompleteCell = "IncompleteCell";
inline constexpr std::string_view kCorruptLog = "CorruptLog";
inline constexpr std::string_view kBuildFailed = "BuildFailed";
inline constexpr std::string_view kConnectFailed = "ConnectFailed";
}  // namespace error_kind

absl::Status MakeError(absl::StatusCode code, std::string_view kind,
                       std::string_view detail);

// The kind prefix of `status`, or "" when it has none (or is OK).
std::string_view ErrorKindOf(const absl::Status& status);

inline bool HasErrorKind(const absl::Status& status, std::string_view kind) {
  return !status.ok() && ErrorKindOf(status) == kind;
}

// The message without its kind prefix.
std::string_view ErrorDetailOf(const absl::Status& status);

}  // namespace wasmflow

#endif  // WASMFLOW_COMMON_ERRORS_H_
