#!/usr/bin/env python3
# Copyright 2026 The wasmflow Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent reference implementation of the benchmark workflow.

Shares no code with the C++ kernels: CRC32 comes from zlib, BLAKE3 from the
`blake3` package, float32 arithmetic from numpy, CBOR is hand-encoded. Its
outputs are frozen into the repository as test vectors and golden digests.

    oracle_pipeline.py golden   > src/steps/golden_digests.inc
    oracle_pipeline.py vectors  > tests/support/oracle_vectors.inc
"""

import struct
import sys
import zlib

import blake3
import numpy as np

MASK64 = (1 << 64) - 1
SIZES = {"small": 16384, "medium": 1048576, "large": 4194304}
WINDOW = 16
FAN_OUT = 4


def splitmix64_bytes(seed, size):
    state = seed
    out = bytearray()
    while len(out) < size:
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        out += struct.pack("<Q", z)
    return bytes(out[:size])


def cbor_head(major, arg):
    if arg < 24:
        return bytes([major << 5 | arg])
    for extra, fmt in ((24, ">B"), (25, ">H"), (26, ">I"), (27, ">Q")):
        if arg < (1 << (8 * struct.calcsize(fmt))):
            return bytes([major << 5 | extra]) + struct.pack(fmt, arg)
    raise ValueError(arg)


def cbor_text(s):
    b = s.encode()
    return cbor_head(3, len(b)) + b


def cbor_bytes(b):
    return cbor_head(2, len(b)) + b


def preprocess(raw):
    groups = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 4).astype(np.int64)
    g = groups.sum(axis=1)
    csum = np.concatenate([[0], np.cumsum(g)])
    j = np.arange(len(g))
    lo = np.maximum(j + 1 - WINDOW, 0)
    window_sum = csum[j + 1] - csum[lo]
    count = j + 1 - lo
    group_mean = g.astype(np.float32) / np.float32(4.0)
    window_mean = window_sum.astype(np.float32) / (4 * count).astype(np.float32)
    v = (group_mean - window_mean) / np.float32(255.0)
    return np.clip(v, np.float32(-1.0), np.float32(1.0)).astype(np.float32)


def matmul_ascending_k(strip, full):
    # c[i][j] = sum_k strip[i][k] * full[k][j], accumulated in ascending k
    # with one float32 rounding per product and per addition.
    c = np.zeros((strip.shape[0], full.shape[1]), dtype=np.float32)
    for k in range(full.shape[0]):
        c += np.outer(strip[:, k], full[k, :]).astype(np.float32)
    return c


def final_frame(values_le):
    return (cbor_head(5, 3) + cbor_text("data") + cbor_bytes(values_le) +
            cbor_text("kind") + cbor_text("f32") + cbor_text("version") +
            cbor_head(0, 1))


def pipeline(seed, size):
    raw = splitmix64_bytes(seed, SIZES[size])
    v = preprocess(raw)
    d = int(round(len(v) ** 0.5))
    assert d * d == len(v) and d % FAN_OUT == 0
    a = v.reshape(d, d)
    rows = d // FAN_OUT
    strips = [matmul_ascending_k(a[k * rows:(k + 1) * rows], a) for k in range(FAN_OUT)]
    c = np.concatenate(strips).astype("<f4")
    values = c.tobytes()
    return blake3.blake3(final_frame(values)).hexdigest()


def c_bytes(hexstr):
    return ", ".join("0x" + hexstr[i:i + 2] for i in range(0, len(hexstr), 2))


def emit_golden():
    print("// Generated by scripts/oracle_pipeline.py golden. Do not edit.")
    print("// {seed, size, final BLAKE3 digest}")
    for seed in (1, 42):
        for size in ("small", "medium", "large"):
            print(f'{{{seed}u, "{size}", "{pipeline(seed, size)}"}},')


def blake3_input(n):
    return bytes(i % 251 for i in range(n))


def emit_vectors():
    print("// Generated by scripts/oracle_pipeline.py vectors. Do not edit.")
    print("// splitmix64 seed 42, first 8 bytes")
    print(f"WASMFLOW_SPLITMIX_SEED42_PREFIX({c_bytes(splitmix64_bytes(42, 8).hex())})")
    print("// CRC32 of ASCII 123456789 and of the seed-42 small payload")
    print(f"WASMFLOW_CRC32_CHECK(0x{zlib.crc32(b'123456789'):08x}u)")
    print(f"WASMFLOW_CRC32_SEED42_SMALL(0x{zlib.crc32(splitmix64_bytes(42, 16384)):08x}u)")
    print("// BLAKE3 of bytes i % 251 for the given lengths")
    for n in (0, 1, 63, 64, 65, 1023, 1024, 1025, 2048, 2049, 3072, 3073,
              4096, 4097, 5120, 5121, 6144, 6145, 7168, 7169, 8192, 8193,
              16384, 31744, 102400):
        print(f'WASMFLOW_BLAKE3_VECTOR({n}, "{blake3.blake3(blake3_input(n)).hexdigest()}")')
    print("// BLAKE3 of the little-endian f32 serialization of the 64x64 identity")
    eye = np.eye(64, dtype="<f4").tobytes()
    print(f'WASMFLOW_BLAKE3_IDENTITY64("{blake3.blake3(eye).hexdigest()}")')
    print("// Preprocess of the seed-42 small payload: BLAKE3 of the f32 output")
    v = preprocess(splitmix64_bytes(42, 16384)).astype("<f4").tobytes()
    print(f'WASMFLOW_PREPROCESS_SEED42_SMALL("{blake3.blake3(v).hexdigest()}")')


if __name__ == "__main__":
    mode = sys.argv[1] if len(sys.argv) > 1 else "golden"
    {"golden": emit_golden, "vectors": emit_vectors}[mode]()
