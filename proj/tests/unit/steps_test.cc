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

#include "wasmflow/steps/steps.h"

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "json.hpp"
#include "wasmflow/common/errors.h"
#include "wasmflow/steps/workflow.h"

namespace wasmflow::steps {
namespace {

struct Blake3Vector {
  size_t length;
  const char* hex;
};
#include "support/oracle_vectors.h"

using payload::SizeLabel;

std::vector<float> Identity(size_t d) {
  std::vector<float> m(d * d, 0.0f);
  for (size_t i = 0; i < d; ++i) m[i * d + i] = 1.0f;
  return m;
}

MatrixBlock Strip(const std::vector<float>& a, uint32_t d, uint32_t from, uint32_t to) {
  MatrixBlock b;
  b.dim_d = d;
  b.rows_from = from;
  b.rows_to = to;
  b.values.assign(a.begin() + from * d, a.begin() + to * d);
  return b;
}

// Naive triple loop with the same ascending-k accumulation.
std::vector<float> NaiveStrip(const std::vector<float>& a, size_t d, size_t from, size_t to) {
  std::vector<float> c((to - from) * d);
  for (size_t i = from; i < to; ++i) {
    for (size_t j = 0; j < d; ++j) {
      float acc = 0.0f;
      for (size_t k = 0; k < d; ++k) acc += a[i * d + k] * a[k * d + j];
      c[(i - from) * d + j] = acc;
    }
  }
  return c;
}

TEST(DOfTest, MapsSizeClassesToDimensions) {
  EXPECT_EQ(DOf(SizeLabel::kSmall), 64);
  EXPECT_EQ(DOf(SizeLabel::kMedium), 512);
  EXPECT_EQ(DOf(SizeLabel::kLarge), 1024);
}

TEST(DataFrameTest, RoundTripsThroughCbor) {
  DataFrame f{1, ElementKind::kF32, {1, 2, 3, 4, 5, 6, 7, 8}, 0xDEADBEEFu};
  auto decoded = DecodeDataFrame(EncodeDataFrame(f));
  ASSERT_TRUE(decoded.ok()) << decoded.status();
  EXPECT_EQ(*decoded, f);
  f.checksum.reset();
  decoded = DecodeDataFrame(EncodeDataFrame(f));
  ASSERT_TRUE(decoded.ok());
  EXPECT_EQ(*decoded, f);
}

TEST(DataFrameTest, DecodesWithIndependentCodec) {
  DataFrame f{1, ElementKind::kU8, {9, 9}, 7u};
  nlohmann::json j = nlohmann::json::from_cbor(EncodeDataFrame(f));
  EXPECT_EQ(j["kind"], "u8");
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["crc32"], 7);
  EXPECT_EQ(j["data"].get_binary(), (std::vector<uint8_t>{9, 9}));
}

TEST(IngestTest, EmptyPayloadHasZeroChecksum) {
  auto out = Ingest(EncodeDataFrame(DataFrame{}));
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->checksum, 0u);
}

TEST(IngestTest, CheckStringYieldsStandardCheckValue) {
  DataFrame f;
  const char* s = "123456789";
  f.payload.assign(s, s + 9);
  auto out = Ingest(EncodeDataFrame(f));
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->checksum, kCrc32Check);
  EXPECT_EQ(out->payload, f.payload);
}

TEST(IngestTest, TruncatedFrameIsMalformed) {
  Bytes enc = MakeIngestInput(payload::Generate({42, SizeLabel::kSmall}));
  enc.resize(enc.size() / 2);
  auto out = Ingest(enc);
  EXPECT_TRUE(HasErrorKind(out.status(), error_kind::kMalformedFrame)) << out.status();
  EXPECT_TRUE(HasErrorKind(Ingest(Bytes{0xFF}).status(), error_kind::kMalformedFrame));
}

TEST(IngestTest, WrongEnvelopeChecksumIsRejected) {
  DataFrame f;
  f.payload = {1, 2, 3};
  f.checksum = 12345u;
  auto out = Ingest(EncodeDataFrame(f));
  EXPECT_TRUE(HasErrorKind(out.status(), error_kind::kChecksumMismatch)) << out.status();
}

TEST(IngestTest, RejectsF32Frames) {
  DataFrame f{1, ElementKind::kF32, {0, 0, 0, 0}, std::nullopt};
  EXPECT_TRUE(HasErrorKind(Ingest(EncodeDataFrame(f)).status(), error_kind::kMalformedFrame));
}

TEST(PreprocessTest, AllZeroInputGivesConstantOutput) {
  DataFrame f;
  f.payload.assign(16384, 0);
  auto out = Preprocess(f);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->element_kind, ElementKind::kF32);
  EXPECT_EQ(out->payload.size(), 16384u);
  std::vector<float> v = FloatsFromLe(out->payload);
  for (float x : v) {
    EXPECT_EQ(x, v[0]);
    EXPECT_GE(x, -1.0f);
    EXPECT_LE(x, 1.0f);
  }
}

TEST(PreprocessTest, KeepsByteLengthAndRange) {
  DataFrame f;
  f.payload = payload::Generate({42, SizeLabel::kMedium});
  auto out = Preprocess(f);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->payload.size(), f.payload.size());
  for (float x : FloatsFromLe(out->payload)) {
    ASSERT_GE(x, -1.0f);
    ASSERT_LE(x, 1.0f);
  }
}

TEST(PreprocessTest, Seed42SmallMatchesReferenceOracle) {
  DataFrame f;
  f.payload = payload::Generate({42, SizeLabel::kSmall});
  auto out = Preprocess(f);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(ToHex(Blake3Digest(out->payload)), kPreprocessSeed42Small);
}

TEST(PreprocessTest, ExtremeGroupsClampToUnitRange) {
  DataFrame f;
  f.payload.assign(64, 0);
  std::fill(f.payload.begin() + 60, f.payload.end(), 255);
  auto out = Preprocess(f);
  ASSERT_TRUE(out.ok());
  std::vector<float> v = FloatsFromLe(out->payload);
  EXPECT_GT(v.back(), 0.0f);
  EXPECT_LE(v.back(), 1.0f);
}

TEST(PreprocessTest, LengthNotDivisibleByFour) {
  DataFrame f;
  f.payload.assign(17, 1);
  EXPECT_TRUE(HasErrorKind(Preprocess(f).status(), error_kind::kLengthNotDivisible));
}

TEST(MapBlockTest, IdentityStripIsIdentityRows) {
  auto eye = Identity(64);
  auto out = MapBlock(Strip(eye, 64, 0, 16), eye);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->values, std::vector<float>(eye.begin(), eye.begin() + 16 * 64));
}

TEST(MapBlockTest, AllOnesGivesDimension) {
  std::vector<float> ones(16, 1.0f);
  auto out = MapBlock(Strip(ones, 4, 0, 1), ones);
  ASSERT_TRUE(out.ok());
  for (float x : out->values) EXPECT_EQ(x, 4.0f);
}

TEST(MapBlockTest, MatchesNaiveOracleBitExactly) {
  DataFrame f;
  f.payload = payload::Generate({42, SizeLabel::kSmall});
  auto pre = Preprocess(f);
  ASSERT_TRUE(pre.ok());
  std::vector<float> a = FloatsFromLe(pre->payload);
  for (uint32_t k = 0; k < 4; ++k) {
    auto out = MapBlock(Strip(a, 64, 16 * k, 16 * (k + 1)), a);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(out->values, NaiveStrip(a, 64, 16 * k, 16 * (k + 1))) << "strip " << k;
  }
}

TEST(MapBlockTest, RejectsNonSquareInput) {
  std::vector<float> a(15, 1.0f);
  MatrixBlock b{4, 0, 1, {1, 1, 1, 1}};
  EXPECT_TRUE(HasErrorKind(MapBlock(b, a).status(), error_kind::kDimensionMismatch));
  // Byte-level: 12 floats is not a square.
  DataFrame f{1, ElementKind::kF32, Bytes(48, 0), std::nullopt};
  EXPECT_TRUE(HasErrorKind(RunStep({StepKind::kS3, 0}, EncodeDataFrame(f)).status(),
                           error_kind::kDimensionMismatch));
}

std::vector<MatrixBlock> IdentityStrips(uint32_t d) {
  auto eye = Identity(d);
  std::vector<MatrixBlock> blocks;
  for (uint32_t k = 0; k < 4; ++k) blocks.push_back(Strip(eye, d, k * d / 4, (k + 1) * d / 4));
  return blocks;
}

TEST(ReduceTest, IdentityStripsDigestSerializedIdentity) {
  auto out = Reduce(IdentityStrips(64));
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(out->values, Identity(64));
  EXPECT_EQ(ToHex(out->digest), kBlake3Identity64);
}

TEST(ReduceTest, ArrivalOrderDoesNotMatter) {
  auto blocks = IdentityStrips(64);
  auto sorted = Reduce(blocks);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(blocks.begin(), blocks.end(), rng);
    auto shuffled = Reduce(blocks);
    ASSERT_TRUE(shuffled.ok());
    EXPECT_EQ(shuffled->values, sorted->values);
    EXPECT_EQ(shuffled->digest, sorted->digest);
  }
}

TEST(ReduceTest, MissingOrOverlappingStripsAreIncomplete) {
  auto blocks = IdentityStrips(64);
  blocks.pop_back();
  EXPECT_TRUE(HasErrorKind(Reduce(blocks).status(), error_kind::kIncompleteFanIn));
  blocks = IdentityStrips(64);
  blocks[3] = blocks[2];
  EXPECT_TRUE(HasErrorKind(Reduce(blocks).status(), error_kind::kIncompleteFanIn));
}

TEST(FinalizeTest, IsDeterministic) {
  std::vector<float> r(16);
  for (size_t i = 0; i < r.size(); ++i) r[i] = static_cast<float>(i) * 0.5f;
  auto a = Finalize(r, std::nullopt);
  auto b = Finalize(r, std::nullopt);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->digest, b->digest);
  EXPECT_EQ(a->digest, Blake3Digest(a->encoded_frame));
  EXPECT_EQ(a->frame.element_kind, ElementKind::kF32);
  EXPECT_EQ(FloatsFromLe(a->frame.payload), r);
  EXPECT_FALSE(a->verified.has_value());
}

TEST(FinalizeTest, VerifiesExpectedDigest) {
  std::vector<float> r(16, 1.0f);
  auto plain = Finalize(r, std::nullopt);
  ASSERT_TRUE(plain.ok());
  auto verified = Finalize(r, plain->digest);
  ASSERT_TRUE(verified.ok());
  EXPECT_EQ(verified->verified, true);
  Digest256 wrong = plain->digest;
  wrong[0] ^= 1;
  EXPECT_TRUE(HasErrorKind(Finalize(r, wrong).status(), error_kind::kDigestMismatch));
}

TEST(PipelineTest, SmallAndMediumMatchGoldenTable) {
  for (uint64_t seed : {1u, 42u}) {
    for (SizeLabel size : {SizeLabel::kSmall, SizeLabel::kMedium}) {
      auto golden = GoldenDigest(seed, size);
      ASSERT_TRUE(golden.has_value());
      auto result = RunNativePipeline(payload::Generate({seed, size}));
      ASSERT_TRUE(result.ok()) << result.status();
      EXPECT_EQ(ToHex(result->final_digest), ToHex(*golden))
          << "seed " << seed << " " << payload::SizeLabelName(size);
    }
  }
}

TEST(PipelineTest, LargeMatchesGoldenTable) {
  auto result = RunNativePipeline(payload::Generate({42, SizeLabel::kLarge}));
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->final_digest, *GoldenDigest(42, SizeLabel::kLarge));
}

TEST(PipelineTest, ExpectedDigestIsVerifiedInFinalStep) {
  Bytes raw = payload::Generate({42, SizeLabel::kSmall});
  auto golden = GoldenDigest(42, SizeLabel::kSmall);
  auto result = RunNativePipeline(raw, golden);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(FinalVerifiedOf(result->final_output), true);
  Digest256 wrong = *golden;
  wrong[31] ^= 0x80;
  EXPECT_TRUE(HasErrorKind(RunNativePipeline(raw, wrong).status(), error_kind::kDigestMismatch));
}

TEST(HandleInvokeTest, UnknownStepYieldsErrorFrame) {
  nlohmann::json frame = {{"op", "invoke"}, {"step_id", "S9"}, {"run_id", "r1"}};
  frame["payload"] = nlohmann::json::binary({});
  nlohmann::json result = nlohmann::json::from_cbor(HandleInvoke(nlohmann::json::to_cbor(frame)));
  EXPECT_EQ(result["op"], "result");
  EXPECT_EQ(result["status"], "error");
  EXPECT_EQ(result["error"]["code"], "UnknownStep");
}

TEST(HandleInvokeTest, RunsStepAndWrapsPayload) {
  nlohmann::json frame = {{"op", "invoke"}, {"step_id", "S1"}, {"run_id", "r1"}};
  frame["payload"] = nlohmann::json::binary(MakeIngestInput(Bytes{1, 2, 3}));
  nlohmann::json result = nlohmann::json::from_cbor(HandleInvoke(nlohmann::json::to_cbor(frame)));
  EXPECT_EQ(result["status"], "ok");
  auto out = DecodeDataFrame(result["payload"].get_binary());
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->payload, (Bytes{1, 2, 3}));
}

}  // namespace
}  // namespace wasmflow::steps
