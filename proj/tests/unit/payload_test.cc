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

#include "wasmflow/payload/payload.h"

#include <array>
#include <cstring>

#include "gtest/gtest.h"

namespace wasmflow::payload {
namespace {

struct Blake3Vector {
  size_t length;
  const char* hex;
};
#include "support/oracle_vectors.h"

TEST(SizeClassTest, ExactByteSizes) {
  EXPECT_EQ(SizeClassOf(SizeLabel::kSmall).byte_size, 16384u);
  EXPECT_EQ(SizeClassOf(SizeLabel::kMedium).byte_size, 1048576u);
  EXPECT_EQ(SizeClassOf(SizeLabel::kLarge).byte_size, 4194304u);
}

TEST(SizeClassTest, NamesRoundTrip) {
  for (SizeLabel label : kAllSizes) {
    auto parsed = ParseSizeLabel(SizeLabelName(label));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, label);
  }
  EXPECT_FALSE(ParseSizeLabel("huge").ok());
}

TEST(GenerateTest, SmallSeed42HasExactSize) {
  EXPECT_EQ(Generate({42, SizeLabel::kSmall}).size(), 16384u);
}

TEST(GenerateTest, IsDeterministic) {
  EXPECT_EQ(Generate({42, SizeLabel::kSmall}), Generate({42, SizeLabel::kSmall}));
}

TEST(GenerateTest, PrefixMatchesReferenceStream) {
  Bytes b = Generate({42, SizeLabel::kSmall});
  EXPECT_EQ(std::memcmp(b.data(), kSplitMixSeed42Prefix, 8), 0);
}

TEST(GenerateTest, DifferentSeedsDiffer) {
  EXPECT_NE(Generate({1, SizeLabel::kSmall}), Generate({2, SizeLabel::kSmall}));
}

TEST(GenerateTest, SmallIsPrefixOfLarge) {
  Bytes small = Generate({5, SizeLabel::kSmall});
  Bytes large = Generate({5, SizeLabel::kLarge});
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
}

TEST(GenerateTest, MediumHistogramIsRoughlyUniform) {
  Bytes b = Generate({42, SizeLabel::kMedium});
  std::array<size_t, 256> counts{};
  for (uint8_t v : b) ++counts[v];
  for (size_t v = 0; v < 256; ++v) {
    EXPECT_GT(counts[v], 0u) << "value " << v;
    EXPECT_LE(counts[v], b.size() / 100) << "value " << v;
  }
}

}  // namespace
}  // namespace wasmflow::payload
