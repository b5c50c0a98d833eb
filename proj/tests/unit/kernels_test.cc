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

#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "wasmflow/common/util.h"
#include "wasmflow/kernels/blake3.h"
#include "wasmflow/kernels/cbor.h"
#include "wasmflow/kernels/crc32.h"
#include "wasmflow/kernels/splitmix64.h"
#include "wasmflow/kernels/wire.h"

namespace wasmflow::kernels {
namespace {

// Bit-at-a-time reflected CRC32, independent of the table-driven kernel.
uint32_t BitwiseCrc32(const uint8_t* data, size_t size) {
  uint32_t crc = 0xFFFFFFFFu;
  for (size_t i = 0; i < size; ++i) {
    crc ^= data[i];
    for (int b = 0; b < 8; ++b) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

struct Blake3Vector {
  size_t length;
  const char* hex;
};

// Reference values frozen from the independent Python oracle.
#include "support/oracle_vectors.h"

TEST(Crc32Test, CheckValueMatchesFrozenReference) {
  const char* check = "123456789";
  const auto* p = reinterpret_cast<const uint8_t*>(check);
  EXPECT_EQ(BitwiseCrc32(p, 9), kCrc32Check);
  EXPECT_EQ(Crc32(p, 9), kCrc32Check);
  EXPECT_EQ(Crc32(p, 9), 0xCBF43926u);
}

TEST(Crc32Test, EmptyInputIsZero) { EXPECT_EQ(Crc32(nullptr, 0), 0u); }

TEST(Crc32Test, TableMatchesBitwiseOnRandomBuffers) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<uint8_t> buf(rng() % 5000);
    for (auto& b : buf) b = static_cast<uint8_t>(rng());
    ASSERT_EQ(Crc32(buf.data(), buf.size()), BitwiseCrc32(buf.data(), buf.size()));
  }
}

TEST(Crc32Test, IncrementalUpdateEqualsOneShot) {
  std::vector<uint8_t> buf(1000);
  FillSplitMix64(3, buf.data(), buf.size());
  uint32_t crc = Crc32Update(0, buf.data(), 123);
  crc = Crc32Update(crc, buf.data() + 123, buf.size() - 123);
  EXPECT_EQ(crc, Crc32(buf.data(), buf.size()));
}

TEST(Crc32Test, Seed42SmallPayloadMatchesReference) {
  std::vector<uint8_t> buf(16384);
  FillSplitMix64(42, buf.data(), buf.size());
  EXPECT_EQ(Crc32(buf.data(), buf.size()), kCrc32Seed42Small);
}

std::vector<uint8_t> Blake3Input(size_t n) {
  std::vector<uint8_t> in(n);
  for (size_t i = 0; i < n; ++i) in[i] = static_cast<uint8_t>(i % 251);
  return in;
}

TEST(Blake3Test, MatchesReferenceVectors) {
  for (const Blake3Vector& v : kBlake3Vectors) {
    std::vector<uint8_t> in = Blake3Input(v.length);
    uint8_t out[kBlake3OutLen];
    Blake3(in.data(), in.size(), out);
    EXPECT_EQ(ToHex(out), v.hex) << "length " << v.length;
  }
}

TEST(Blake3Test, ChunkedUpdatesEqualOneShot) {
  std::vector<uint8_t> in = Blake3Input(20000);
  uint8_t one_shot[kBlake3OutLen];
  Blake3(in.data(), in.size(), one_shot);
  for (size_t step : {1u, 7u, 64u, 1000u, 1024u, 4099u}) {
    Blake3Hasher h;
    for (size_t i = 0; i < in.size(); i += step) {
      h.Update(in.data() + i, std::min(step, in.size() - i));
    }
    uint8_t out[kBlake3OutLen];
    h.Finalize(out);
    EXPECT_EQ(std::memcmp(out, one_shot, kBlake3OutLen), 0) << "step " << step;
  }
}

TEST(SplitMix64Test, Seed42PrefixMatchesReference) {
  uint8_t out[8];
  FillSplitMix64(42, out, 8);
  EXPECT_EQ(std::memcmp(out, kSplitMixSeed42Prefix, 8), 0);
  SplitMix64 rng(42);
  EXPECT_EQ(rng.Next(), 0xBDD732262FEB6E95ull);
}

TEST(SplitMix64Test, PartialTailTakesLowBytes) {
  uint8_t full[16], part[13];
  FillSplitMix64(9, full, 16);
  FillSplitMix64(9, part, 13);
  EXPECT_EQ(std::memcmp(full, part, 13), 0);
}

// --- CBOR ----------------------------------------------------------------

std::vector<uint8_t> Encode(void (*fn)(cbor::Writer&)) {
  cbor::Writer counter;
  fn(counter);
  std::vector<uint8_t> out(counter.size());
  cbor::Writer w(out.data(), out.size());
  fn(w);
  EXPECT_FALSE(w.overflowed());
  EXPECT_EQ(w.size(), out.size());
  return out;
}

TEST(CborTest, WriterOutputDecodesWithIndependentCodec) {
  auto bytes = Encode([](cbor::Writer& w) {
    w.MapHeader(7);
    w.Text("a");
    w.Uint(23);
    w.Text("b");
    w.Uint(1ull << 40);
    w.Text("c");
    w.Int(-500);
    w.Text("d");
    const uint8_t raw[3] = {1, 2, 3};
    w.ByteString(raw, 3);
    w.Text("e");
    w.Bool(true);
    w.Text("f");
    w.Float64(2.5);
    w.Text("g");
    w.ArrayHeader(2);
    w.Null();
    w.Text("x");
  });
  nlohmann::json j = nlohmann::json::from_cbor(bytes);
  EXPECT_EQ(j["a"], 23);
  EXPECT_EQ(j["b"], 1ull << 40);
  EXPECT_EQ(j["c"], -500);
  EXPECT_EQ(j["d"].get_binary(), (std::vector<uint8_t>{1, 2, 3}));
  EXPECT_EQ(j["e"], true);
  EXPECT_EQ(j["f"], 2.5);
  EXPECT_TRUE(j["g"][0].is_null());
  EXPECT_EQ(j["g"][1], "x");
}

TEST(CborTest, ReaderParsesIndependentEncoderOutput) {
  nlohmann::json j = {{"n", 70000}, {"neg", -3}, {"s", "hi"}, {"f", 0.25},
                      {"arr", {1, 2, 3}}, {"t", false}};
  j["bin"] = nlohmann::json::binary({9, 8, 7});
  std::vector<uint8_t> bytes = nlohmann::json::to_cbor(j);
  cbor::Reader r(bytes.data(), bytes.size());
  uint64_t n;
  ASSERT_TRUE(r.ReadMapHeader(&n));
  ASSERT_EQ(n, 7u);
  int seen = 0;
  for (uint64_t i = 0; i < n; ++i) {
    cbor::Bytes key;
    ASSERT_TRUE(r.ReadText(&key));
    if (cbor::Equals(key, "n")) {
      uint64_t v;
      ASSERT_TRUE(r.ReadUint(&v));
      EXPECT_EQ(v, 70000u);
    } else if (cbor::Equals(key, "neg")) {
      int64_t v;
      ASSERT_TRUE(r.ReadInt(&v));
      EXPECT_EQ(v, -3);
    } else if (cbor::Equals(key, "f")) {
      double v;
      ASSERT_TRUE(r.ReadNumber(&v));
      EXPECT_EQ(v, 0.25);
    } else if (cbor::Equals(key, "bin")) {
      cbor::Bytes b;
      ASSERT_TRUE(r.ReadBytes(&b));
      ASSERT_EQ(b.size, 3u);
      EXPECT_EQ(b.data[0], 9);
    } else {
      ASSERT_TRUE(r.Skip());
    }
    ++seen;
  }
  EXPECT_EQ(seen, 7);
  EXPECT_TRUE(r.AtEnd());
}

TEST(CborTest, HeadSizesFollowArgumentWidth) {
  EXPECT_EQ(cbor::HeadSize(23), 1u);
  EXPECT_EQ(cbor::HeadSize(24), 2u);
  EXPECT_EQ(cbor::HeadSize(255), 2u);
  EXPECT_EQ(cbor::HeadSize(256), 3u);
  EXPECT_EQ(cbor::HeadSize(65536), 5u);
  EXPECT_EQ(cbor::HeadSize(1ull << 32), 9u);
}

TEST(CborTest, TruncatedInputFailsCleanly) {
  auto bytes = Encode([](cbor::Writer& w) {
    w.MapHeader(1);
    w.Text("payload");
    const uint8_t raw[40] = {};
    w.ByteString(raw, 40);
  });
  for (size_t cut = 0; cut < bytes.size(); ++cut) {
    cbor::Reader r(bytes.data(), cut);
    EXPECT_FALSE(r.Skip() && r.AtEnd()) << "cut " << cut;
  }
}

TEST(CborTest, SkipRejectsExcessiveNesting) {
  std::vector<uint8_t> deep(100, 0x81);  // array(1) nested 100 times
  deep.push_back(0x00);
  cbor::Reader r(deep.data(), deep.size());
  EXPECT_FALSE(r.Skip());
}

TEST(CborTest, WriterDetectsOverflow) {
  uint8_t buf[4];
  cbor::Writer w(buf, sizeof(buf));
  w.Text("too long for the buffer");
  EXPECT_TRUE(w.overflowed());
}

TEST(WireTest, StepRefsRoundTrip) {
  const char* names[] = {"S1", "S2", "S3[0]", "S3[1]", "S3[2]", "S3[3]", "S4", "S5"};
  for (const char* name : names) {
    wire::StepRef ref;
    ASSERT_TRUE(wire::ParseStepRef({reinterpret_cast<const uint8_t*>(name), std::strlen(name)},
                                   &ref))
        << name;
    char buf[8];
    size_t n = wire::FormatStepRef(ref, buf);
    EXPECT_EQ(std::string(buf, n), name);
  }
}

TEST(WireTest, RejectsInvalidStepIds) {
  for (const char* name : {"", "S", "S0", "S6", "S3", "S3[4]", "S1[0]", "s1", "S3[0", "S22"}) {
    wire::StepRef ref;
    EXPECT_FALSE(wire::ParseStepRef(
        {reinterpret_cast<const uint8_t*>(name), std::strlen(name)}, &ref))
        << name;
  }
}

}  // namespace
}  // namespace wasmflow::kernels
