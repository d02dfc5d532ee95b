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

#include "hprg_agg/rng.hpp"

#include <algorithm>

#include "hprg_agg/errors.hpp"

namespace hprg_agg {

Rng::Rng(ByteSpan seed) {
  ByteWriter w;
  w.raw(as_bytes("hprg-agg/rng")).prefixed(seed);
  key_ = sha256(w.bytes());
}

Rng Rng::from_u64(std::uint64_t seed) {
  ByteWriter w;
  w.u64(seed);
  return Rng(w.bytes());
}

Rng Rng::derive(std::string_view label) const {
  ByteWriter w;
  w.raw(key_).prefixed(as_bytes(label));
  return Rng(w.bytes());
}

void Rng::refill() {
  ByteWriter w;
  w.raw(key_).u64(counter_++);
  block_ = sha256(w.bytes());
  used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    if (used_ == block_.size()) refill();
    std::size_t n = std::min(out.size() - pos, block_.size() - used_);
    std::copy_n(block_.begin() + used_, n, out.begin() + pos);
    used_ += n;
    pos += n;
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

Rng::result_type Rng::operator()() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (std::uint8_t b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t Rng::uniform_u64(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  // Largest multiple of bound that fits, to avoid modulo bias.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t v;
  do {
    v = (*this)();
  } while (v > limit);
  return v % bound;
}

mpz_class Rng::random_bits(unsigned bits) {
  Bytes buf = bytes((bits + 7) / 8);
  if (bits % 8 != 0 && !buf.empty()) {
    buf[0] &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
  }
  mpz_class out;
  mpz_import(out.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
  return out;
}

mpz_class Rng::uniform_below(const mpz_class& bound) {
  if (bound <= 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  const unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  mpz_class v;
  do {
    v = random_bits(bits);
  } while (v >= bound);
  return v;
}

}  // namespace hprg_agg
