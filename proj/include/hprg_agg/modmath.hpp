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

#ifndef HPRG_AGG_MODMATH_HPP_
#define HPRG_AGG_MODMATH_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

#include "hprg_agg/bytes.hpp"

namespace hprg_agg {

using BigInt = mpz_class;

// Shamir field Z_P.
struct FieldParams {
  BigInt P;

  friend bool operator==(const FieldParams& a, const FieldParams& b) {
    return a.P == b.P;
  }
};

struct FieldElement {
  BigInt value;  // in [0, P)

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.value == b.value;
  }
};

// Quadratic-residue subgroup of Z_p^* for a safe prime p = 2q + 1. The
// subgroup has prime order q and is generated by g.
struct GroupParams {
  BigInt p;
  BigInt q;
  BigInt g;

  std::size_t bits() const { return mpz_sizeinbase(p.get_mpz_t(), 2); }

  friend bool operator==(const GroupParams& a, const GroupParams& b) {
    return a.p == b.p && a.q == b.q && a.g == b.g;
  }
};

struct GroupElement {
  BigInt value;  // in [1, p), order divides q

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.value == b.value;
  }
};

// Deterministic safe-prime group of exactly `bit_length` bits derived from
// `seed`. Requires bit_length >= 16.
GroupParams gen_group_params(unsigned bit_length, ByteSpan seed);

// Builds the group for a known safe prime: q = (p-1)/2, g = h^2 for the
// smallest h >= 2 with h^2 != 1. Throws Error(kInvalidArgument) if p is not a
// safe prime.
GroupParams group_params_from_safe_prime(const BigInt& p);

// Checks p, q prime, p = 2q + 1, g of order q. Throws Error(kConfig).
void validate_group_params(const GroupParams& params);

// Smallest prime P > n * q, so that a sum of n seeds in Z_q never wraps mod P.
FieldParams field_for_group(const GroupParams& group, std::size_t n);

GroupElement group_identity();
GroupElement group_generator(const GroupParams& params);
bool is_group_member(const GroupParams& params, const GroupElement& e);

// base^e with e reduced mod q first (so negative exponents are fine).
GroupElement group_exp(const GroupParams& params, const GroupElement& base,
                       const BigInt& e);
GroupElement group_mul(const GroupParams& params, const GroupElement& a,
                       const GroupElement& b);
GroupElement group_inv(const GroupParams& params, const GroupElement& a);

inline constexpr std::string_view kDefaultHashDomain = "hprg-agg/H";

// Random-oracle hash H: N -> G. Expands (domain || index || counter) through
// SHA-256 in counter mode to |p| + 64 bits, reduces mod p and squares; a
// result equal to 1 (or 0) bumps the counter and retries.
GroupElement hash_to_group(const GroupParams& params, std::uint64_t index,
                           ByteSpan domain = as_bytes(kDefaultHashDomain));

FieldElement field_add(const FieldParams& f, const FieldElement& a,
                       const FieldElement& b);
FieldElement field_sub(const FieldParams& f, const FieldElement& a,
                       const FieldElement& b);
FieldElement field_mul(const FieldParams& f, const FieldElement& a,
                       const FieldElement& b);
FieldElement field_inv(const FieldParams& f, const FieldElement& a);

// Minimal-length big-endian magnitude with a 4-byte length prefix. Zero
// encodes as an empty string.
void write_bigint(ByteWriter& w, const BigInt& v);
BigInt read_bigint(ByteReader& r);
Bytes encode_bigint(const BigInt& v);
Bytes to_bytes_be(const BigInt& v);
BigInt from_bytes_be(ByteSpan data);

Bytes encode_group_params(const GroupParams& params);
GroupParams decode_group_params(ByteSpan data);

std::string to_hex(const BigInt& v);

}  // namespace hprg_agg

#endif  // HPRG_AGG_MODMATH_HPP_
