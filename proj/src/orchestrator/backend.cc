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

#include "wasmflow/orchestrator/backend.h"

#include <charconv>

#include "wasmflow/orchestrator/bridge_backend.h"
#include "wasmflow/orchestrator/http_backend.h"

namespace wasmflow::orchestrator {

absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(const std::string& name,
                                                     const EndpointConfig& config) {
  if (config.transport == "http") {
    auto backend = HttpBackend::Create(name, config.endpoint, config.timeout);
    if (!backend.ok()) return backend.status();
    return std::unique_ptr<Backend>(*std::move(backend));
  }
  if (config.transport == "bridge") {
    size_t colon = config.endpoint.rfind(':');
    int port = -1;
    if (colon != std::string::npos) {
      const char* first = config.endpoint.data() + colon + 1;
      const char* last = config.endpoint.data() + config.endpoint.size();
      auto [ptr, ec] = std::from_chars(first, last, port);
      if (ec != std::errc() || ptr != last) port = -1;
    }
    if (port < 0 || port > 65535) {
      return absl::InvalidArgumentError("bridge endpoint must be host:port: " + config.endpoint);
    }
    auto backend =
        BridgeBackend::Listen(name, config.endpoint.substr(0, colon), port, config.timeout);
    if (!backend.ok()) return backend.status();
    return std::unique_ptr<Backend>(*std::move(backend));
  }
  return absl::InvalidArgumentError("unknown transport '" + config.transport +
                                    "' (expected http or bridge)");
}

}  // namespace wasmflow::orchestrator
