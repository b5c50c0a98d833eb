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

// Exposes support/oracle_vectors.inc (generated by
// scripts/oracle_pipeline.py vectors) as constants. Include inside the
// namespace that should own them, after defining `struct Blake3Vector`.

// First pass: scalar constants.
#define WASMFLOW_SPLITMIX_SEED42_PREFIX(...) \
  inline constexpr uint8_t kSplitMixSeed42Prefix[] = {__VA_ARGS__};
#define WASMFLOW_CRC32_CHECK(v) inline constexpr uint32_t kCrc32Check = v;
#define WASMFLOW_CRC32_SEED42_SMALL(v) inline constexpr uint32_t kCrc32Seed42Small = v;
#define WASMFLOW_BLAKE3_VECTOR(n, hex)
#define WASMFLOW_BLAKE3_IDENTITY64(hex) inline constexpr char kBlake3Identity64[] = hex;
#define WASMFLOW_PREPROCESS_SEED42_SMALL(hex) \
  inline constexpr char kPreprocessSeed42Small[] = hex;
#include "support/oracle_vectors.inc"
#undef WASMFLOW_SPLITMIX_SEED42_PREFIX
#undef WASMFLOW_CRC32_CHECK
#undef WASMFLOW_CRC32_SEED42_SMALL
#undef WASMFLOW_BLAKE3_VECTOR
#undef WASMFLOW_BLAKE3_IDENTITY64
#undef WASMFLOW_PREPROCESS_SEED42_SMALL

// Second pass: the BLAKE3 length table.
#define WASMFLOW_SPLITMIX_SEED42_PREFIX(...)
#define WASMFLOW_CRC32_CHECK(v)
#define WASMFLOW_CRC32_SEED42_SMALL(v)
#define WASMFLOW_BLAKE3_VECTOR(n, hex) {n, hex},
#define WASMFLOW_BLAKE3_IDENTITY64(hex)
#define WASMFLOW_PREPROCESS_SEED42_SMALL(hex)
inline constexpr Blake3Vector kBlake3Vectors[] = {
#include "support/oracle_vectors.inc"
};
#undef WASMFLOW_SPLITMIX_SEED42_PREFIX
#undef WASMFLOW_CRC32_CHECK
#undef WASMFLOW_CRC32_SEED42_SMALL
#undef WASMFLOW_BLAKE3_VECTOR
#undef WASMFLOW_BLAKE3_IDENTITY64
#undef WASMFLOW_PREPROCESS_SEED42_SMALL
