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

// Builds a CBOR map with text keys in canonical order (shorter keys first,
// then bytewise). Large byte strings are referenced, not copied, until the
// single final write.

#ifndef WASMFLOW_SRC_PROTOCOL_CANONICAL_MAP_H_
#define WASMFLOW_SRC_PROTOCOL_CANONICAL_MAP_H_

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "wasmflow/common/util.h"
#include "wasmflow/kernels/cbor.h"

namespace wasmflow::protocol::internal {

// Two-pass encode of `fn(Writer&)` into an exactly sized buffer.
template <class Fn>
Bytes EncodeWith(Fn&& fn) {
  kernels::cbor::Writer counter;
  fn(counter);
  Bytes out(counter.size());
  kernels::cbor::Writer w(out.data(), out.size());
  fn(w);
  return out;
}

class CanonicalMap {
 public:
  void Text(std::string_view key, std::string_view value) {
    Add(key, EncodeWith([&](kernels::cbor::Writer& w) { w.Text(value.data(), value.size()); }));
  }
  void Int(std::string_view key, int64_t value) {
    Add(key, EncodeWith([&](kernels::cbor::Writer& w) { w.Int(value); }));
  }
  void Uint(std::string_view key, uint64_t value) {
    Add(key, EncodeWith([&](kernels::cbor::Writer& w) { w.Uint(value); }));
  }
  void Bool(std::string_view key, bool value) {
    Add(key, EncodeWith([&](kernels::cbor::Writer& w) { w.Bool(value); }));
  }
  // References `value`; it must outlive Finish().
  void ByteString(std::string_view key, ByteSpan value) {
    Entry e;
    e.key = std::string(key);
    e.head = EncodeWith([&](kernels::cbor::Writer& w) {
      w.Head(kernels::cbor::Major::kBytes, value.size());
    });
    e.body = value;
    entries_.push_back(std::move(e));
  }
  // A value that is already CBOR-encoded.
  void Encoded(std::string_view key, Bytes encoded) { Add(key, std::move(encoded)); }

  Bytes Finish() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      if (a.key.size() != b.key.size()) return a.key.size() < b.key.size();
      return a.key < b.key;
    });
    auto write = [&](kernels::cbor::Writer& w) {
      w.MapHeader(entries_.size());
      for (const Entry& e : entries_) {
        w.Text(e.key.data(), e.key.size());
        w.Raw(e.head.data(), e.head.size());
        if (!e.body.empty()) w.Raw(e.body.data(), e.body.size());
      }
    };
    return EncodeWith(write);
  }

 private:
  struct Entry {
    std::string key;
    Bytes head;
    ByteSpan body;
  };

  void Add(std::string_view key, Bytes encoded) {
    Entry e;
    e.key = std::string(key);
    e.head = std::move(encoded);
    entries_.push_back(std::move(e));
  }

  std::vector<Entry> entries_;
};

}  // namespace wasmflow::protocol::internal

#endif  // WASMFLOW_SRC_PROTOCOL_CANONICAL_MAP_H_
