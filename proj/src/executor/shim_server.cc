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

#include "wasmflow/executor/shim_server.h"

#include <optional>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "wasmflow/common/errors.h"
#include "wasmflow/protocol/multipart.h"

namespace wasmflow::executor {
namespace {

using protocol::ErrorResult;

ByteSpan AsSpan(const std::string& s) {
  return ByteSpan(reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

void ReplyFrame(httplib::Response& res, int status, const ResultFrame& frame) {
  Bytes body = protocol::EncodeFrame(frame);
  res.status = status;
  res.set_content(reinterpret_cast<const char*>(body.data()), body.size(), kCborContentType);
}

void ReplyError(httplib::Response& res, int status, const absl::Status& error) {
  std::string_view kind = ErrorKindOf(error);
  ReplyFrame(res, status,
             ErrorResult(kind.empty() ? error_kind::kMalformedFrame : kind, ErrorDetailOf(error)));
}

// Reads the invoke frame from either body encoding.
absl::StatusOr<InvokeFrame> ReadInvoke(const httplib::Request& req) {
  if (req.is_multipart_form_data()) {
    if (!req.has_file(protocol::kMetaField)) {
      return MakeError(absl::StatusCode::kInvalidArgument, error_kind::kMalformedFrame,
                       "multipart request without a meta part");
    }
    // get_file_value returns by value; keep the parts alive while joining.
    const httplib::MultipartFormData meta = req.get_file_value(protocol::kMetaField);
    std::optional<httplib::MultipartFormData> payload_part;
    std::optional<ByteSpan> payload;
    if (req.has_file(protocol::kPayloadField)) {
      payload_part = req.get_file_value(protocol::kPayloadField);
      payload = AsSpan(payload_part->content);
    }
    return protocol::JoinMultipart(AsSpan(meta.content), payload);
  }
  return protocol::DecodeInvokeFrame(AsSpan(req.body));
}

absl::StatusOr<InvokeOptions> ReadOptions(const httplib::Request& req) {
  InvokeOptions options;
  if (req.has_param("mode")) {
    auto mode = ParseCompileMode(req.get_param_value("mode"));
    if (!mode.ok()) return mode.status();
    options.mode = *mode;
  }
  if (req.has_param("state")) {
    auto state = ParseStatePolicy(req.get_param_value("state"));
    if (!state.ok()) return state.status();
    options.state = *state;
  }
  return options;
}

}  // namespace

std::string ArtifactSizesJson(const std::vector<ArtifactSizeEntry>& entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const ArtifactSizeEntry& e : entries) {
    out.push_back({{"step", protocol::StepKindName(e.step)},
                   {"wasm_bytes", e.wasm_bytes},
                   {"aot_bytes", e.aot_bytes},
                   {"pct_increase", e.pct_increase}});
  }
  return out.dump();
}

ShimServer::ShimServer(Executor& executor)
    : executor_(executor), server_(std::make_unique<httplib::Server>()) {
  Install();
}

ShimServer::~ShimServer() { Stop(); }

void ShimServer::Install() {
  server_->Post("/invoke", [this](const httplib::Request& req, httplib::Response& res) {
    auto options = ReadOptions(req);
    if (!options.ok()) return ReplyError(res, 400, options.status());
    auto frame = ReadInvoke(req);
    if (!frame.ok()) {
      // A well-formed frame naming an unknown step is a processed invocation.
      int status = HasErrorKind(frame.status(), error_kind::kUnknownStep) ? 200 : 400;
      return ReplyError(res, status, frame.status());
    }
    ResultFrame result = executor_.Invoke(*frame, *options);
    bool exhausted = result.error && result.error->code == error_kind::kPoolExhausted;
    ReplyFrame(res, exhausted ? 503 : 200, result);
  });

  server_->Post("/pool/reset", [this](const httplib::Request&, httplib::Response& res) {
    executor_.ResetPool();
    res.set_content(R"({"status":"reset"})", "application/json");
  });

  server_->Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    const ExecutorConfig& c = executor_.config();
    nlohmann::json body = {{"status", "ok"},
                           {"engine", executor_.engine().Name()},
                           {"engine_version", executor_.engine().Version()},
                           {"mode", CompileModeName(c.mode)},
                           {"state_policy", StatePolicyName(c.state_policy)},
                           {"pool_size", c.pool_size},
                           {"sample_period_us", c.sample_period.count()},
                           {"timeout_ms", c.timeout.count()}};
    res.set_content(body.dump(), "application/json");
  });

  server_->Get("/artifacts/sizes", [this](const httplib::Request&, httplib::Response& res) {
    auto sizes = executor_.ArtifactSizes();
    if (!sizes.ok()) {
      nlohmann::json body = {{"error", std::string(ErrorKindOf(sizes.status()))},
                             {"message", std::string(ErrorDetailOf(sizes.status()))}};
      res.status = 404;
      res.set_content(body.dump(), "application/json");
      return;
    }
    res.set_content(ArtifactSizesJson(*sizes), "application/json");
  });
}

absl::StatusOr<int> ShimServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    return absl::UnavailableError("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

absl::Status ShimServer::Run(const std::string& host, int port) {
  if (!server_->listen(host, port)) {
    return absl::UnavailableError("cannot listen on " + host + ":" + std::to_string(port));
  }
  return absl::OkStatus();
}

void ShimServer::Stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace wasmflow::executor
