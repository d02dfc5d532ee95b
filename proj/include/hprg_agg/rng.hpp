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

#ifndef HPRG_AGG_RNG_HPP_
#define HPRG_AGG_RNG_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "hprg_agg/bytes.hpp"

namespace hprg_agg {

// Deterministic SHA-256 counter-mode generator. Every random choice in the
// library (seeds, Shamir coefficients, keys, nonces) flows through an Rng so a
// whole round is reproducible from one seed. Satisfies
// UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(ByteSpan seed);
  static Rng from_u64(std::uint64_t seed);

  // Independent child stream keyed by (this stream's key, label). Does not
  // advance this stream.
  Rng derive(std::string_view label) const;

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  // Uniform integer in [0, bound), by rejection sampling. bound > 0.
  mpz_class uniform_below(const mpz_class& bound);
  // Uniform integer in [0, bound).
  std::uint64_t uniform_u64(std::uint64_t bound);
  // Uniform integer with at most `bits` bits.
  mpz_class random_bits(unsigned bits);

 private:
  void refill();

  Digest key_{};
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = sizeof(Digest);
};

}  // namespace hprg_agg

#endif  // HPRG_AGG_RNG_HPP_
