// Copyright 2026 The hprg_agg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HPRG_AGG_BYTES_HPP_
#define HPRG_AGG_BYTES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hprg_agg {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

inline ByteSpan as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Big-endian writer for the canonical wire encodings. Every variable-length
// field is prefixed with a 4-byte big-endian length.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& raw(ByteSpan data);
  ByteWriter& prefixed(ByteSpan data);

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Counterpart of ByteWriter. Throws Error(kMalformed) on truncated input.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  ByteSpan raw(std::size_t n);
  ByteSpan prefixed();

  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  // Throws unless every byte was consumed.
  void expect_done() const;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

Digest sha256(ByteSpan data);

std::string base64_encode(ByteSpan data);
Bytes base64_decode(std::string_view text);

std::string hex_encode(ByteSpan data);

}  // namespace hprg_agg

#endif  // HPRG_AGG_BYTES_HPP_
