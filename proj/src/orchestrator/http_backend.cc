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

#include "wasmflow/orchestrator/http_backend.h"

#include "httplib.h"
#include "wasmflow/common/errors.h"

namespace wasmflow::orchestrator {
namespace {

constexpr char kCbor[] = "application/cbor";

absl::Status Unavailable(std::string_view detail) {
  return MakeError(absl::StatusCode::kUnavailable, error_kind::kBackendUnavailable, detail);
}

}  // namespace

absl::StatusOr<std::unique_ptr<HttpBackend>> HttpBackend::Create(
    std::string name, std::string base_url, std::chrono::milliseconds timeout,
    size_t multipart_threshold) {
  if (base_url.rfind("http://", 0) != 0) {
    return absl::InvalidArgumentError("HTTP endpoint must start with http://: " + base_url);
  }
  while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();
  return std::unique_ptr<HttpBackend>(
      new HttpBackend(std::move(name), std::move(base_url), timeout, multipart_threshold));
}

absl::StatusOr<ResultFrame> HttpBackend::Invoke(const InvokeFrame& frame,
                                                const InvocationSettings& settings) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(std::chrono::seconds(5));
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  std::string path = "/invoke?mode=" + std::string(protocol::CompileModeName(settings.mode)) +
                     "&state=" + std::string(protocol::StatePolicyName(settings.state));

  protocol::MultipartParts parts = protocol::SplitMultipart(frame, multipart_threshold_);
  httplib::Result res;
  if (parts.payload) {
    httplib::MultipartFormDataItems items = {
        {protocol::kMetaField, std::string(parts.meta.begin(), parts.meta.end()), "meta", kCbor},
        {protocol::kPayloadField, std::string(parts.payload->begin(), parts.payload->end()),
         "payload", "application/octet-stream"}};
    res = client.Post(path, items);
  } else {
    res = client.Post(path, reinterpret_cast<const char*>(parts.meta.data()), parts.meta.size(),
                      kCbor);
  }
  if (!res) return Unavailable(base_url_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200 && res->status != 400 && res->status != 503) {
    return Unavailable(base_url_ + ": HTTP " + std::to_string(res->status));
  }
  auto result = protocol::DecodeResultFrame(
      ByteSpan(reinterpret_cast<const uint8_t*>(res->body.data()), res->body.size()));
  if (!result.ok()) {
    return Unavailable(base_url_ + ": undecodable response: " +
                       std::string(ErrorDetailOf(result.status())));
  }
  return result;
}

absl::Status HttpBackend::ResetPool() {
  httplib::Client client(base_url_);
  client.set_connection_timeout(std::chrono::seconds(5));
  auto res = client.Post("/pool/reset");
  if (!res) return Unavailable(base_url_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200) return Unavailable(base_url_ + ": reset returned " + std::to_string(res->status));
  return absl::OkStatus();
}

absl::Status HttpBackend::Health() {
  httplib::Client client(base_url_);
  client.set_connection_timeout(std::chrono::seconds(5));
  auto res = client.Get("/healthz");
  if (!res) return Unavailable(base_url_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200) return Unavailable(base_url_ + ": healthz returned " + std::to_string(res->status));
  return absl::OkStatus();
}

}  // namespace wasmflow::orchestrator
