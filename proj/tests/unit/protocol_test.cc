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

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "wasmflow/common/errors.h"
#include "wasmflow/kernels/splitmix64.h"
#include "wasmflow/protocol/frames.h"
#include "wasmflow/protocol/multipart.h"

namespace wasmflow::protocol {
namespace {

Bytes RandomBytes(size_t n, uint64_t seed) {
  Bytes b(n);
  kernels::FillSplitMix64(seed, b.data(), n);
  return b;
}

InvokeFrame MakeInvoke(size_t payload_size) {
  return InvokeFrame{{StepKind::kS3, 2}, "cell-0-abc", RandomBytes(payload_size, 11)};
}

TEST(FramesTest, InvokeRoundTripsLosslessly) {
  InvokeFrame f{{StepKind::kS1, -1}, "r1", {1, 2, 3}};
  auto decoded = DecodeInvokeFrame(EncodeFrame(f));
  ASSERT_TRUE(decoded.ok()) << decoded.status();
  EXPECT_EQ(*decoded, f);
}

TEST(FramesTest, ErrorResultRoundTrips) {
  ResultFrame f = ErrorResult("StepTrap", "boom");
  auto decoded = DecodeResultFrame(EncodeFrame(f));
  ASSERT_TRUE(decoded.ok()) << decoded.status();
  EXPECT_EQ(*decoded, f);
  EXPECT_EQ(decoded->error->message, "boom");
  EXPECT_TRUE(HasErrorKind(ResultStatusOf(*decoded), "StepTrap"));
}

TEST(FramesTest, FullResultRoundTrips) {
  ResultFrame f;
  f.payload = {9, 8, 7};
  f.run_id = "r2";
  f.step_id = StepRef{StepKind::kS4, -1};
  f.total_us = 1234;
  f.instance = InstanceState::kWarm;
  f.phase_breakdown = PhaseBreakdown{1, 2, 3, 4, 5};
  f.resource_samples = std::vector<ResourceSample>{{100, 12.5, 4096}, {120, 99.0, 8192}};
  f.resource_best_effort = true;
  auto decoded = DecodeResultFrame(EncodeFrame(f));
  ASSERT_TRUE(decoded.ok()) << decoded.status();
  EXPECT_EQ(*decoded, f);
}

TEST(FramesTest, LargePayloadEnvelopeOverheadIsSmall) {
  InvokeFrame f = MakeInvoke(4 << 20);
  Bytes enc = EncodeFrame(f);
  EXPECT_LT(enc.size() - f.payload.size(), 1024u);
  auto decoded = DecodeInvokeFrame(enc);
  ASSERT_TRUE(decoded.ok());
  EXPECT_EQ(*decoded, f);
}

TEST(FramesTest, KeysAreCanonicallyOrderedAndNormative) {
  ResultFrame f;
  f.payload = {1};
  f.run_id = "r";
  f.step_id = StepRef{StepKind::kS1, -1};
  f.total_us = 5;
  f.instance = InstanceState::kCold;
  f.phase_breakdown = PhaseBreakdown{};
  Bytes enc = EncodeFrame(f);
  kernels::cbor::Reader r(enc.data(), enc.size());
  uint64_t n;
  ASSERT_TRUE(r.ReadMapHeader(&n));
  std::vector<std::string> keys;
  for (uint64_t i = 0; i < n; ++i) {
    kernels::cbor::Bytes key;
    ASSERT_TRUE(r.ReadText(&key));
    keys.emplace_back(reinterpret_cast<const char*>(key.data), key.size);
    ASSERT_TRUE(r.Skip());
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"op", "run_id", "status", "payload", "step_id",
                                            "instance", "total_us", "phase_breakdown"}));
}

TEST(FramesTest, DecodesIndependentlyEncodedFrameWithUnknownKeys) {
  nlohmann::json j = {{"op", "invoke"}, {"step_id", "S3[1]"}, {"run_id", "x"},
                      {"future_field", {{"nested", true}}}};
  j["payload"] = nlohmann::json::binary({4, 5});
  auto decoded = DecodeInvokeFrame(nlohmann::json::to_cbor(j));
  ASSERT_TRUE(decoded.ok()) << decoded.status();
  EXPECT_EQ(decoded->step_id, (StepRef{StepKind::kS3, 1}));
  EXPECT_EQ(decoded->payload, (Bytes{4, 5}));
}

TEST(FramesTest, EncodedFrameReadsWithIndependentCodec) {
  InvokeFrame f{{StepKind::kS5, -1}, "run", {0xAA}};
  nlohmann::json j = nlohmann::json::from_cbor(EncodeFrame(f));
  EXPECT_EQ(j["op"], "invoke");
  EXPECT_EQ(j["step_id"], "S5");
  EXPECT_EQ(j["run_id"], "run");
  EXPECT_EQ(j["payload"].get_binary(), (Bytes{0xAA}));
}

TEST(FramesTest, RejectsInvariantViolations) {
  nlohmann::json j = {{"op", "result"}, {"status", "error"}};
  EXPECT_TRUE(HasErrorKind(DecodeResultFrame(nlohmann::json::to_cbor(j)).status(),
                           error_kind::kMalformedFrame));
  j = {{"op", "result"}, {"status", "ok"}};
  EXPECT_FALSE(DecodeResultFrame(nlohmann::json::to_cbor(j)).ok());
  j = {{"op", "invoke"}, {"step_id", "S1"}, {"run_id", ""}};
  j["payload"] = nlohmann::json::binary({});
  EXPECT_FALSE(DecodeInvokeFrame(nlohmann::json::to_cbor(j)).ok());
  j["run_id"] = "r";
  j["step_id"] = "S7";
  EXPECT_TRUE(HasErrorKind(DecodeInvokeFrame(nlohmann::json::to_cbor(j)).status(),
                           error_kind::kUnknownStep));
  j["step_id"] = "S1";
  j["op"] = "result";
  EXPECT_FALSE(DecodeInvokeFrame(nlohmann::json::to_cbor(j)).ok());
}

TEST(FramesTest, ControlFrameRoundTripsAndPeeks) {
  ControlFrame c{"reset", "reset-1"};
  Bytes enc = EncodeFrame(c);
  auto decoded = DecodeControlFrame(enc);
  ASSERT_TRUE(decoded.ok());
  EXPECT_EQ(*decoded, c);
  EXPECT_EQ(*PeekOp(enc), "reset");
  EXPECT_EQ(*PeekOp(EncodeFrame(MakeInvoke(3))), "invoke");
}

TEST(MultipartTest, SmallPayloadStaysSinglePart) {
  InvokeFrame f = MakeInvoke(16 << 10);
  MultipartParts parts = SplitMultipart(f, 64 << 10);
  EXPECT_FALSE(parts.payload.has_value());
  auto joined = JoinMultipart(parts.meta, std::nullopt);
  ASSERT_TRUE(joined.ok());
  EXPECT_EQ(*joined, f);
}

TEST(MultipartTest, LargePayloadSplitsAndJoins) {
  InvokeFrame f = MakeInvoke(1 << 20);
  MultipartParts parts = SplitMultipart(f, 64 << 10);
  ASSERT_TRUE(parts.payload.has_value());
  EXPECT_EQ(*parts.payload, f.payload);
  EXPECT_LT(parts.meta.size(), 200u);
  auto joined = JoinMultipart(parts.meta, ByteSpan(*parts.payload));
  ASSERT_TRUE(joined.ok()) << joined.status();
  EXPECT_EQ(*joined, f);
}

TEST(MultipartTest, ThresholdBoundaryIsInclusive) {
  EXPECT_TRUE(SplitMultipart(MakeInvoke(100), 100).payload.has_value());
  EXPECT_FALSE(SplitMultipart(MakeInvoke(99), 100).payload.has_value());
}

TEST(MultipartTest, TamperedPayloadIsDetected) {
  InvokeFrame f = MakeInvoke(1 << 20);
  MultipartParts parts = SplitMultipart(f);
  Bytes tampered = *parts.payload;
  tampered[tampered.size() / 3] ^= 0x01;
  EXPECT_TRUE(HasErrorKind(JoinMultipart(parts.meta, ByteSpan(tampered)).status(),
                           error_kind::kPayloadDigestMismatch));
  tampered.pop_back();
  EXPECT_TRUE(HasErrorKind(JoinMultipart(parts.meta, ByteSpan(tampered)).status(),
                           error_kind::kPayloadDigestMismatch));
}

TEST(MultipartTest, PayloadPartWithoutReferenceIsMalformed) {
  InvokeFrame f = MakeInvoke(10);
  Bytes extra = {1};
  EXPECT_TRUE(HasErrorKind(JoinMultipart(EncodeFrame(f), ByteSpan(extra)).status(),
                           error_kind::kMalformedFrame));
}

TEST(MultipartTest, RandomFramesRoundTripBothWays) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    size_t size = rng() % (256 << 10);
    InvokeFrame f{AllStepIds()[rng() % AllStepIds().size()], "r-" + std::to_string(i),
                  RandomBytes(size, rng())};
    MultipartParts parts = SplitMultipart(f, 1 + rng() % (128 << 10));
    std::optional<ByteSpan> payload;
    if (parts.payload) payload = ByteSpan(*parts.payload);
    auto joined = JoinMultipart(parts.meta, payload);
    ASSERT_TRUE(joined.ok()) << joined.status();
    ASSERT_EQ(*joined, f);
  }
}

TEST(StepNamesTest, KindNamesHaveNoBranchSuffix) {
  EXPECT_EQ(StepKindName(StepKind::kS1), "S1");
  EXPECT_EQ(StepKindName(StepKind::kS3), "S3");
  EXPECT_EQ(StepKindName(StepKind::kS5), "S5");
  EXPECT_EQ(StepIdName({StepKind::kS3, 2}), "S3[2]");
  EXPECT_EQ(ParseStepKindName("S4"), StepKind::kS4);
  EXPECT_FALSE(ParseStepKindName("S3[0]").has_value());
  EXPECT_FALSE(ParseStepKindName("S6").has_value());
}

}  // namespace
}  // namespace wasmflow::protocol
