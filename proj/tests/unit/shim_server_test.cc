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

#include <filesystem>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "support/temp_dir.h"
#include "wasmflow/payload/payload.h"
#include "wasmflow/protocol/multipart.h"
#include "wasmflow/steps/steps.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::executor {
namespace {

using protocol::InstanceState;
using protocol::ResultStatus;

class ShimServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (StepKind kind : kAllStepKinds) {
      std::filesystem::copy_file(WasmPath(WASMFLOW_TEST_ARTIFACT_DIR, kind),
                                 WasmPath(dir_.path(), kind));
    }
    ExecutorConfig config;
    config.artifact_dir = dir_.path();
    executor_ = *Executor::Create(config, *MakeWasmtimeEngine());
    server_ = std::make_unique<ShimServer>(*executor_);
    auto port = server_->Start("127.0.0.1", 0);
    ASSERT_TRUE(port.ok()) << port.status();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", *port);
  }

  void TearDown() override { server_->Stop(); }

  ResultFrame Decode(const httplib::Result& res) {
    EXPECT_TRUE(res);
    EXPECT_EQ(res->get_header_value("Content-Type"), kCborContentType);
    auto frame = protocol::DecodeResultFrame(
        ByteSpan(reinterpret_cast<const uint8_t*>(res->body.data()), res->body.size()));
    EXPECT_TRUE(frame.ok()) << frame.status();
    return frame.ok() ? *frame : ResultFrame{};
  }

  httplib::Result PostFrame(const protocol::InvokeFrame& frame, const std::string& query = "") {
    Bytes body = protocol::EncodeFrame(frame);
    return client_->Post("/invoke" + query, reinterpret_cast<const char*>(body.data()),
                         body.size(), kCborContentType);
  }

  test::TempDir dir_;
  std::unique_ptr<Executor> executor_;
  std::unique_ptr<ShimServer> server_;
  std::unique_ptr<httplib::Client> client_;
};

protocol::InvokeFrame Preprocess(payload::SizeLabel size) {
  Bytes raw = payload::Generate({42, size});
  auto ingested = steps::RunStep({StepKind::kS1, -1}, steps::MakeIngestInput(raw));
  return protocol::InvokeFrame{{StepKind::kS2, -1}, "shim-run", *ingested};
}

TEST_F(ShimServerTest, SinglePartInvokeMatchesNativeStep) {
  protocol::InvokeFrame frame = Preprocess(payload::SizeLabel::kSmall);
  auto res = PostFrame(frame, "?mode=jit&state=cold");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  ResultFrame r = Decode(res);
  ASSERT_EQ(r.status, ResultStatus::kOk);
  EXPECT_EQ(r.payload, *steps::RunStep(frame.step_id, frame.payload));
  EXPECT_EQ(r.instance, InstanceState::kCold);
  EXPECT_EQ(r.run_id, "shim-run");
}

TEST_F(ShimServerTest, MultipartInvokeMatchesSinglePart) {
  protocol::InvokeFrame frame = Preprocess(payload::SizeLabel::kMedium);
  protocol::MultipartParts parts = protocol::SplitMultipart(frame);
  ASSERT_TRUE(parts.payload.has_value());
  httplib::MultipartFormDataItems items = {
      {protocol::kMetaField, std::string(parts.meta.begin(), parts.meta.end()), "meta",
       kCborContentType},
      {protocol::kPayloadField, std::string(parts.payload->begin(), parts.payload->end()),
       "payload", "application/octet-stream"}};
  auto res = client_->Post("/invoke", items);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  ResultFrame r = Decode(res);
  ASSERT_EQ(r.status, ResultStatus::kOk);
  EXPECT_EQ(r.payload, *steps::RunStep(frame.step_id, frame.payload));
}

TEST_F(ShimServerTest, WarmPolicyReusesInstancesUntilReset) {
  protocol::InvokeFrame frame = Preprocess(payload::SizeLabel::kSmall);
  EXPECT_EQ(Decode(PostFrame(frame, "?state=warm")).instance, InstanceState::kCold);
  ResultFrame warm = Decode(PostFrame(frame, "?state=warm"));
  EXPECT_EQ(warm.instance, InstanceState::kWarm);
  EXPECT_EQ(warm.phase_breakdown->compile_us, 0);
  auto reset = client_->Post("/pool/reset");
  ASSERT_TRUE(reset);
  EXPECT_EQ(reset->status, 200);
  EXPECT_EQ(Decode(PostFrame(frame, "?state=warm")).instance, InstanceState::kCold);
}

TEST_F(ShimServerTest, MalformedRequestsAreRejected) {
  auto res = client_->Post("/invoke", "not cbor", kCborContentType);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(Decode(res).error->code, "MalformedFrame");

  res = PostFrame(Preprocess(payload::SizeLabel::kSmall), "?mode=interp");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  nlohmann::json unknown = {{"op", "invoke"}, {"step_id", "S9"}, {"run_id", "r"}};
  unknown["payload"] = nlohmann::json::binary({});
  Bytes body = nlohmann::json::to_cbor(unknown);
  res = client_->Post("/invoke", reinterpret_cast<const char*>(body.data()), body.size(),
                      kCborContentType);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Decode(res).error->code, "UnknownStep");
}

TEST_F(ShimServerTest, HealthAndSizes) {
  auto health = client_->Get("/healthz");
  ASSERT_TRUE(health);
  nlohmann::json h = nlohmann::json::parse(health->body);
  EXPECT_EQ(h["status"], "ok");
  EXPECT_EQ(h["engine"], "wasmtime");

  auto missing = client_->Get("/artifacts/sizes");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["error"], "MissingArtifact");

  ASSERT_TRUE(executor_->PrecompileAll().ok());
  auto sizes = client_->Get("/artifacts/sizes");
  ASSERT_TRUE(sizes);
  EXPECT_EQ(sizes->status, 200);
  nlohmann::json s = nlohmann::json::parse(sizes->body);
  ASSERT_EQ(s.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(s[i]["step"], "S" + std::to_string(i + 1));
  EXPECT_GT(s[2]["aot_bytes"].get<uint64_t>(), 0u);
}

TEST(ArtifactSizesJsonTest, SerializesEntries) {
  nlohmann::json j = nlohmann::json::parse(
      ArtifactSizesJson({MakeSizeEntry(StepKind::kS1, 152000, 342000)}));
  EXPECT_EQ(j[0]["pct_increase"], 125);
  EXPECT_EQ(j[0]["wasm_bytes"], 152000);
}

}  // namespace
}  // namespace wasmflow::executor
