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

// Portable BLAKE3 (hash mode, 32-byte output). Freestanding so the guests and
// the native oracle share one implementation.

#ifndef WASMFLOW_KERNELS_BLAKE3_H_
#define WASMFLOW_KERNELS_BLAKE3_H_

#include <stddef.h>
#include <stdint.h>

namespace wasmflow::kernels {

inline constexpr size_t kBlake3OutLen = 32;

namespace blake3_internal {

inline constexpr size_t kBlockLen = 64;
inline constexpr size_t kChunkLen = 1024;
// Enough for 2^54 chunks.
inline constexpr size_t kMaxDepth = 54;

inline constexpr uint32_t kChunkStart = 1u << 0;
inline constexpr uint32_t kChunkEnd = 1u << 1;
inline constexpr uint32_t kParent = 1u << 2;
inline constexpr uint32_t kRoot = 1u << 3;

inline constexpr uint32_t kIv[8] = {0x6A09E667u, 0xBB67AE85u, 0x3C6EF372u,
                                    0xA54FF53Au, 0x510E527Fu, 0x9B05688Cu,
                                    0x1F83D9ABu, 0x5BE0CD19u};

inline constexpr uint8_t kMsgPermutation[16] = {2, 6,  3,  10, 7, 0,  4,  13,
                                                1, 11, 12, 5,  9, 14, 15, 8};

inline uint32_t Rotr(uint32_t w, int c) { return (w >> c) | (w << (32 - c)); }

inline void G(uint32_t* s, int a, int b, int c, int d, uint32_t mx,
              uint32_t my) {
  s[a] = s[a] + s[b] + mx;
  s[d] = Rotr(s[d] ^ s[a], 16);
  s[c] = s[c] + s[d];
  s[b] = Rotr(s[b] ^ s[c], 12);
  s[a] = s[a] + s[b] + my;
  s[d] = Rotr(s[d] ^ s[a], 8);
  s[c] = s[c] + s[d];
  s[b] = Rotr(s[b] ^ s[c], 7);
}

inline void Round(uint32_t* s, const uint32_t* m) {
  G(s, 0, 4, 8, 12, m[0], m[1]);
  G(s, 1, 5, 9, 13, m[2], m[3]);
  G(s, 2, 6, 10, 14, m[4], m[5]);
  G(s, 3, 7, 11, 15, m[6], m[7]);
  G(s, 0, 5, 10, 15, m[8], m[9]);
  G(s, 1, 6, 11, 12, m[10], m[11]);
  G(s, 2, 7, 8, 13, m[12], m[13]);
  G(s, 3, 4, 9, 14, m[14], m[15]);
}

// Writes the full 16-word compression output.
inline void Compress(const uint32_t cv[8], const uint32_t block[16],
                     uint64_t counter, uint32_t block_len, uint32_t flags,
                     uint32_t out[16]) {
  uint32_t s[16] = {cv[0],
                    cv[1],
                    cv[2],
                    cv[3],
                    cv[4],
                    cv[5],
                    cv[6],
                    cv[7],
                    kIv[0],
                    kIv[1],
                    kIv[2],
                    kIv[3],
                    static_cast<uint32_t>(counter),
                    static_cast<uint32_t>(counter >> 32),
                    block_len,
                    flags};
  uint32_t m[16];
  for (int i = 0; i < 16; ++i) m[i] = block[i];
  for (int r = 0; r < 7; ++r) {
    Round(s, m);
    if (r == 6) break;
    uint32_t p[16];
    for (int i = 0; i < 16; ++i) p[i] = m[kMsgPermutation[i]];
    for (int i = 0; i < 16; ++i) m[i] = p[i];
  }
  for (int i = 0; i < 8; ++i) {
    out[i] = s[i] ^ s[i + 8];
    out[i + 8] = s[i + 8] ^ cv[i];
  }
}

inline void WordsFromLeBytes(const uint8_t* bytes, uint32_t* words,
                             size_t n_words) {
  for (size_t i = 0; i < n_words; ++i) {
    const uint8_t* b = bytes + 4 * i;
    words[i] = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
               (static_cast<uint32_t>(b[2]) << 16) |
               (static_cast<uint32_t>(b[3]) << 24);
  }
}

struct Output {
  uint32_t input_cv[8];
  uint32_t block_words[16];
  uint64_t counter;
  uint32_t block_len;
  uint32_t flags;

  void ChainingValue(uint32_t out_cv[8]) const {
    uint32_t full[16];
    Compress(input_cv, block_words, counter, block_len, flags, full);
    for (int i = 0; i < 8; ++i) out_cv[i] = full[i];
  }

  void RootBytes(uint8_t out[kBlake3OutLen]) const {
    uint32_t full[16];
    Compress(input_cv, block_words, 0, block_len, flags | kRoot, full);
    for (int i = 0; i < 8; ++i) {
      for (int b = 0; b < 4; ++b) {
        out[4 * i + b] = static_cast<uint8_t>(full[i] >> (8 * b));
      }
    }
  }
};

inline Output ParentOutput(const uint32_t left[8], const uint32_t right[8]) {
  Output o{};
  for (int i = 0; i < 8; ++i) {
    o.input_cv[i] = kIv[i];
    o.block_words[i] = left[i];
    o.block_words[i + 8] = right[i];
  }
  o.counter = 0;
  o.block_len = kBlockLen;
  o.flags = kParent;
  return o;
}

class ChunkState {
 public:
  ChunkState() { Reset(0); }

  void Reset(uint64_t chunk_counter) {
    for (int i = 0; i < 8; ++i) cv_[i] = kIv[i];
    chunk_counter_ = chunk_counter;
    block_len_ = 0;
    blocks_compressed_ = 0;
  }

  size_t Len() const { return kBlockLen * blocks_compressed_ + block_len_; }
  uint64_t counter() const { return chunk_counter_; }

  void Update(const uint8_t* input, size_t size) {
    while (size > 0) {
      if (block_len_ == kBlockLen) {
        uint32_t words[16];
        WordsFromLeBytes(block_, words, 16);
        uint32_t full[16];
        Compress(cv_, words, chunk_counter_, kBlockLen, StartFlag(), full);
        for (int i = 0; i < 8; ++i) cv_[i] = full[i];
        ++blocks_compressed_;
        block_len_ = 0;
      }
      size_t want = kBlockLen - block_len_;
      size_t take = want < size ? want : size;
      for (size_t i = 0; i < take; ++i) block_[block_len_ + i] = input[i];
      block_len_ += take;
      input += take;
      size -= take;
    }
  }

  Output MakeOutput() const {
    Output o{};
    for (int i = 0; i < 8; ++i) o.input_cv[i] = cv_[i];
    uint8_t padded[kBlockLen] = {};
    for (size_t i = 0; i < block_len_; ++i) padded[i] = block_[i];
    WordsFromLeBytes(padded, o.block_words, 16);
    o.counter = chunk_counter_;
    o.block_len = static_cast<uint32_t>(block_len_);
    o.flags = StartFlag() | kChunkEnd;
    return o;
  }

 private:
  uint32_t StartFlag() const { return blocks_compressed_ == 0 ? kChunkStart : 0; }

  uint32_t cv_[8];
  uint64_t chunk_counter_;
  uint8_t block_[kBlockLen];
  size_t block_len_;
  size_t blocks_compressed_;
};

}  // namespace blake3_internal

class Blake3Hasher {
 public:
  Blake3Hasher() = default;

  void Update(const uint8_t* input, size_t size) {
    using blake3_internal::kChunkLen;
    while (size > 0) {
      if (chunk_.Len() == kChunkLen) {
        uint32_t chunk_cv[8];
        chunk_.MakeOutput().ChainingValue(chunk_cv);
        uint64_t total_chunks = chunk_.counter() + 1;
        AddChunkChainingValue(chunk_cv, total_chunks);
        chunk_.Reset(total_chunks);
      }
      size_t want = kChunkLen - chunk_.Len();
      size_t take = want < size ? want : size;
      chunk_.Update(input, take);
      input += take;
      size -= take;
    }
  }

  void Finalize(uint8_t out[kBlake3OutLen]) const {
    blake3_internal::Output output = chunk_.MakeOutput();
    size_t remaining = stack_len_;
    while (remaining > 0) {
      --remaining;
      uint32_t right[8];
      output.ChainingValue(right);
      output = blake3_internal::ParentOutput(stack_[remaining], right);
    }
    output.RootBytes(out);
  }

 private:
  void AddChunkChainingValue(uint32_t cv[8], uint64_t total_chunks) {
    // Merge completed subtrees: one merge per trailing zero bit.
    while ((total_chunks & 1) == 0) {
      --stack_len_;
      blake3_internal::ParentOutput(stack_[stack_len_], cv).ChainingValue(cv);
      total_chunks >>= 1;
    }
    for (int i = 0; i < 8; ++i) stack_[stack_len_][i] = cv[i];
    ++stack_len_;
  }

  blake3_internal::ChunkState chunk_;
  uint32_t stack_[blake3_internal::kMaxDepth][8] = {};
  size_t stack_len_ = 0;
};

inline void Blake3(const uint8_t* data, size_t size,
                   uint8_t out[kBlake3OutLen]) {
  Blake3Hasher h;
  h.Update(data, size);
  h.Finalize(out);
}

}  // namespace wasmflow::kernels

#endif  // WASMFLOW_KERNELS_BLAKE3_H_
