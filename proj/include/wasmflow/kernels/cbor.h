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

// Minimal CBOR (RFC 8949) subset used by every frame on the wire.
//
// The writer always emits the shortest head encoding and definite lengths.
// Callers emit map keys in canonical order (shorter keys first, then
// bytewise). The reader accepts definite-length items only and skips unknown
// items of any major type, so decoders can ignore keys they do not know.
//
// Freestanding: no allocation, no exceptions.

#ifndef WASMFLOW_KERNELS_CBOR_H_
#define WASMFLOW_KERNELS_CBOR_H_

#include <stddef.h>
#include <stdint.h>

namespace wasmflow::kernels::cbor {

enum class Major : uint8_t {
  kUnsigned = 0,
  kNegative = 1,
  kBytes = 2,
  kText = 3,
  kArray = 4,
  kMap = 5,
  kTag = 6,
  kSimple = 7,
};

struct Bytes {
  const uint8_t* data = nullptr;
  size_t size = 0;
};

inline bool Equals(Bytes b, const char* literal) {
  size_t n = 0;
  while (literal[n] != '\0') ++n;
  if (n != b.size) return false;
  for (size_t i = 0; i < n; ++i) {
    if (b.data[i] != static_cast<uint8_t>(literal[i])) return false;
  }
  return true;
}

// Writes into a caller-owned buffer. With a null buffer it only counts, which
// gives the exact encoded size for a second, real pass.
class Writer {
 public:
  Writer() = default;
  Writer(uint8_t* out, size_t capacity) : out_(out), capacity_(capacity) {}

  size_t size() const { return size_; }
  bool overflowed() const { return overflow_; }

  void Head(Major major, uint64_t arg) {
    uint8_t m = static_cast<uint8_t>(static_cast<uint8_t>(major) << 5);
    if (arg < 24) {
      Put(static_cast<uint8_t>(m | arg));
    } else if (arg <= 0xFF) {
      Put(m | 24);
      Put(static_cast<uint8_t>(arg));
    } else if (arg <= 0xFFFF) {
      Put(m | 25);
      PutBigEndian(arg, 2);
    } else if (arg <= 0xFFFFFFFFull) {
      Put(m | 26);
      PutBigEndian(arg, 4);
    } else {
      Put(m | 27);
      PutBigEndian(arg, 8);
    }
  }

  void Uint(uint64_t v) { Head(Major::kUnsigned, v); }
  void Int(int64_t v) {
    if (v >= 0) {
      Head(Major::kUnsigned, static_cast<uint64_t>(v));
    } else {
      Head(Major::kNegative, static_cast<uint64_t>(-(v + 1)));
    }
  }
  void Bool(bool v) { Put(v ? 0xF5 : 0xF4); }
  void Null() { Put(0xF6); }
  void Float64(double v) {
    Put(0xFB);
    uint64_t bits;
    __builtin_memcpy(&bits, &v, sizeof(bits));
    PutBigEndian(bits, 8);
  }
  void ArrayHeader(uint64_t n) { Head(Major::kArray, n); }
  void MapHeader(uint64_t n) { Head(Major::kMap, n); }
  void ByteString(const uint8_t* data, size_t n) {
    Head(Major::kBytes, n);
    Raw(data, n);
  }
  void Text(const char* s, size_t n) {
    Head(Major::kText, n);
    Raw(reinterpret_cast<const uint8_t*>(s), n);
  }
  void Text(const char* s) {
    size_t n = 0;
    while (s[n] != '\0') ++n;
    Text(s, n);
  }
  // Appends an already-encoded item (or any raw bytes) verbatim.
  void Raw(const uint8_t* data, size_t n) {
    if (n == 0) return;
    if (out_ != nullptr) {
      if (size_ + n > capacity_) {
        overflow_ = true;
      } else {
        __builtin_memcpy(out_ + size_, data, n);
      }
    }
    size_ += n;
  }
  // Reserves `n` bytes and returns where to write them, or null when counting
  // or out of space.
  uint8_t* Reserve(size_t n) {
    uint8_t* p = nullptr;
    if (out_ != nullptr) {
      if (size_ + n > capacity_) {
        overflow_ = true;
      } else {
        p = out_ + size_;
      }
    }
    size_ += n;
    return p;
  }

 private:
  void Put(uint8_t b) {
    if (out_ != nullptr) {
      if (size_ + 1 > capacity_) {
        overflow_ = true;
      } else {
        out_[size_] = b;
      }
    }
    ++size_;
  }
  void PutBigEndian(uint64_t v, int n) {
    for (int i = n - 1; i >= 0; --i) Put(static_cast<uint8_t>(v >> (8 * i)));
  }

  uint8_t* out_ = nullptr;
  size_t capacity_ = 0;
  size_t size_ = 0;
  bool overflow_ = false;
};

// Encoded size of a head carrying `arg`.
inline constexpr size_t HeadSize(uint64_t arg) {
  return arg < 24 ? 1 : arg <= 0xFF ? 2 : arg <= 0xFFFF ? 3 : arg <= 0xFFFFFFFFull ? 5 : 9;
}

class Reader {
 public:
  static constexpr int kMaxDepth = 32;

  Reader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit Reader(cbor::Bytes b) : data_(b.data), size_(b.size) {}

  bool ok() const { return ok_; }
  bool AtEnd() const { return pos_ == size_; }
  size_t position() const { return pos_; }
  const uint8_t* data() const { return data_; }

  // Peeks the major type of the next item without consuming it.
  bool PeekMajor(Major* major) const {
    if (!ok_ || pos_ >= size_) return false;
    *major = static_cast<Major>(data_[pos_] >> 5);
    return true;
  }

  bool ReadHead(Major* major, uint64_t* arg) {
    if (!ok_ || pos_ >= size_) return Fail();
    uint8_t ib = data_[pos_++];
    *major = static_cast<Major>(ib >> 5);
    uint8_t info = ib & 0x1F;
    if (info < 24) {
      *arg = info;
      return true;
    }
    int n = info == 24 ? 1 : info == 25 ? 2 : info == 26 ? 4 : info == 27 ? 8 : 0;
    // Indefinite lengths (31) and reserved values (28-30) are rejected.
    if (n == 0) return Fail();
    if (size_ - pos_ < static_cast<size_t>(n)) return Fail();
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | data_[pos_++];
    *arg = v;
    return true;
  }

  bool ReadUint(uint64_t* v) {
    Major m;
    if (!ReadHead(&m, v)) return false;
    return m == Major::kUnsigned ? true : Fail();
  }

  bool ReadInt(int64_t* v) {
    Major m;
    uint64_t arg;
    if (!ReadHead(&m, &arg)) return false;
    if (m == Major::kUnsigned && arg <= 0x7FFFFFFFFFFFFFFFull) {
      *v = static_cast<int64_t>(arg);
      return true;
    }
    if (m == Major::kNegative && arg <= 0x7FFFFFFFFFFFFFFFull) {
      *v = -static_cast<int64_t>(arg) - 1;
      return true;
    }
    return Fail();
  }

  bool ReadBytes(cbor::Bytes* out) { return ReadString(Major::kBytes, out); }
  bool ReadText(cbor::Bytes* out) { return ReadString(Major::kText, out); }

  bool ReadArrayHeader(uint64_t* n) { return ReadContainer(Major::kArray, n); }
  bool ReadMapHeader(uint64_t* n) { return ReadContainer(Major::kMap, n); }

  bool ReadBool(bool* v) {
    if (!ok_ || pos_ >= size_) return Fail();
    uint8_t ib = data_[pos_];
    if (ib != 0xF4 && ib != 0xF5) return Fail();
    ++pos_;
    *v = ib == 0xF5;
    return true;
  }

  // Accepts half, single and double precision, and integers.
  bool ReadNumber(double* v) {
    if (!ok_ || pos_ >= size_) return Fail();
    uint8_t ib = data_[pos_];
    if ((ib >> 5) == 0 || (ib >> 5) == 1) {
      int64_t i;
      if (!ReadInt(&i)) return false;
      *v = static_cast<double>(i);
      return true;
    }
    if (ib == 0xF9 || ib == 0xFA || ib == 0xFB) {
      int n = ib == 0xF9 ? 2 : ib == 0xFA ? 4 : 8;
      ++pos_;
      if (size_ - pos_ < static_cast<size_t>(n)) return Fail();
      uint64_t bits = 0;
      for (int i = 0; i < n; ++i) bits = (bits << 8) | data_[pos_++];
      if (n == 8) {
        __builtin_memcpy(v, &bits, sizeof(double));
      } else if (n == 4) {
        uint32_t b32 = static_cast<uint32_t>(bits);
        float f;
        __builtin_memcpy(&f, &b32, sizeof(float));
        *v = f;
      } else {
        *v = HalfToDouble(static_cast<uint16_t>(bits));
      }
      return true;
    }
    return Fail();
  }

  // Skips one complete item, including nested containers.
  bool Skip() { return SkipDepth(0); }

  // Reads one complete item and returns its encoded byte range.
  bool ReadRawItem(cbor::Bytes* out) {
    size_t start = pos_;
    if (!Skip()) return false;
    out->data = data_ + start;
    out->size = pos_ - start;
    return true;
  }

 private:
  bool Fail() {
    ok_ = false;
    return false;
  }

  bool ReadString(Major want, cbor::Bytes* out) {
    Major m;
    uint64_t n;
    if (!ReadHead(&m, &n)) return false;
    if (m != want) return Fail();
    if (n > size_ - pos_) return Fail();
    out->data = data_ + pos_;
    out->size = static_cast<size_t>(n);
    pos_ += static_cast<size_t>(n);
    return true;
  }

  bool ReadContainer(Major want, uint64_t* n) {
    Major m;
    if (!ReadHead(&m, n)) return false;
    if (m != want) return Fail();
    // Every element needs at least one byte; rejects absurd counts early.
    if (*n > size_ - pos_) return Fail();
    return true;
  }

  bool SkipDepth(int depth) {
    if (depth > kMaxDepth) return Fail();
    Major m;
    uint64_t arg;
    if (!ReadHead(&m, &arg)) return false;
    switch (m) {
      case Major::kUnsigned:
      case Major::kNegative:
        return true;
      case Major::kBytes:
      case Major::kText:
        if (arg > size_ - pos_) return Fail();
        pos_ += static_cast<size_t>(arg);
        return true;
      case Major::kArray:
        if (arg > size_ - pos_) return Fail();
        for (uint64_t i = 0; i < arg; ++i) {
          if (!SkipDepth(depth + 1)) return false;
        }
        return true;
      case Major::kMap:
        if (arg > size_ - pos_) return Fail();
        for (uint64_t i = 0; i < 2 * arg; ++i) {
          if (!SkipDepth(depth + 1)) return false;
        }
        return true;
      case Major::kTag:
        return SkipDepth(depth + 1);
      case Major::kSimple:
        // ReadHead already consumed the 1/2/4/8 trailing bytes.
        return true;
    }
    return Fail();
  }

  static double HalfToDouble(uint16_t h) {
    int exp = (h >> 10) & 0x1F;
    int mant = h & 0x3FF;
    double val;
    if (exp == 0) {
      val = mant * (1.0 / 16777216.0);  // 2^-24
    } else if (exp != 31) {
      double m = 1.0 + mant / 1024.0;
      val = m;
      for (int i = 15; i < exp; ++i) val *= 2.0;
      for (int i = exp; i < 15; ++i) val *= 0.5;
    } else {
      val = mant == 0 ? __builtin_inf() : __builtin_nan("");
    }
    return (h & 0x8000) ? -val : val;
  }

  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  bool ok_ = true;
};

}  // namespace wasmflow::kernels::cbor

#endif  // WASMFLOW_KERNELS_CBOR_H_
