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

#include "wasmflow/common/errors.h"

namespace wasmflow {

absl::Status MakeError(absl::StatusCode code, std::string_view kind,
                       std::string_view detail) {
  std::string message(kind);
  message += ": ";
  message += detail;
  return absl::Status(code, message);
}

std::string_view ErrorKindOf(const absl::Status& status) {
  if (status.ok()) return {};
  std::string_view msg(status.message().data(), status.message().size());
  size_t colon = msg.find(": ");
  if (colon == std::string_view::npos) return {};
  std::string_view kind = msg.substr(0, colon);
  for (char c : kind) {
    bool alpha = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    if (!alpha) return {};
  }
  return kind;
}

std::string_view ErrorDetailOf(const absl::Status& status) {
  std::string_view msg(status.message().data(), status.message().size());
  std::string_view kind = ErrorKindOf(status);
  if (kind.empty()) return msg;
  return msg.substr(kind.size() + 2);
}

}  // namespace wasmflow
