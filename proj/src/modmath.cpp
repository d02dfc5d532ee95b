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

#include "hprg_agg/modmath.hpp"

#include <vector>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/errors.hpp"
#include "hprg_agg/rng.hpp"

namespace hprg_agg {
namespace {

constexpr int kPrimalityReps = 32;
constexpr unsigned kSieveLimit = 1u << 14;
constexpr std::uint64_t kSearchWindow = 1u << 16;

bool is_probable_prime(const BigInt& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) != 0;
}

// Odd primes below kSieveLimit.
const std::vector<unsigned>& sieve_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> composite(kSieveLimit, false);
    std::vector<unsigned> out;
    for (unsigned i = 3; i < kSieveLimit; i += 2) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned j = i * i; j < kSieveLimit; j += 2 * i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace

GroupParams gen_group_params(unsigned bit_length, ByteSpan seed) {
  if (bit_length < 16) {
    throw Error(ErrorCode::kInvalidArgument,
                "group bit length must be at least 16");
  }
  Rng rng = Rng(seed).derive("group-params");
  const auto& primes = sieve_primes();
  const unsigned q_bits = bit_length - 1;
  BigInt q_top;
  mpz_ui_pow_ui(q_top.get_mpz_t(), 2, q_bits);  // q < 2^(bits-1)

  std::vector<unsigned> residues(primes.size());
  for (;;) {
    // Random odd q with its top bit set, then scan q, q+2, ... with a sieve
    // that rejects q or 2q+1 divisible by a small prime.
    BigInt start = rng.random_bits(q_bits);
    mpz_setbit(start.get_mpz_t(), q_bits - 1);
    mpz_setbit(start.get_mpz_t(), 0);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      residues[i] = static_cast<unsigned>(mpz_fdiv_ui(start.get_mpz_t(), primes[i]));
    }
    for (std::uint64_t d = 0; d < kSearchWindow; d += 2) {
      bool rejected = false;
      for (std::size_t i = 0; i < primes.size(); ++i) {
        const unsigned r = primes[i];
        const std::uint64_t rq = (residues[i] + d) % r;
        if (rq == 0 || (2 * rq + 1) % r == 0) {
          rejected = true;
          break;
        }
      }
      if (rejected) continue;
      BigInt q = start + static_cast<unsigned long>(d);
      if (q >= q_top) break;
      if (!is_probable_prime(q)) continue;
      BigInt p = 2 * q + 1;
      if (!is_probable_prime(p)) continue;
      return group_params_from_safe_prime(p);
    }
  }
}

GroupParams group_params_from_safe_prime(const BigInt& p) {
  if (p < 5 || !is_probable_prime(p)) {
    throw Error(ErrorCode::kInvalidArgument, "p is not a prime >= 5");
  }
  BigInt q = (p - 1) / 2;
  if (!is_probable_prime(q)) {
    throw Error(ErrorCode::kInvalidArgument, "p is not a safe prime");
  }
  GroupParams params{p, q, 0};
  for (BigInt h = 2;; ++h) {
    BigInt g = (h * h) % p;
    if (g != 1) {
      params.g = g;
      break;
    }
  }
  return params;
}

void validate_group_params(const GroupParams& params) {
  if (params.p != 2 * params.q + 1) {
    throw Error(ErrorCode::kConfig, "group: p != 2q + 1");
  }
  if (!is_probable_prime(params.q) || !is_probable_prime(params.p)) {
    throw Error(ErrorCode::kConfig, "group: p or q is not prime");
  }
  if (params.g <= 1 || params.g >= params.p) {
    throw Error(ErrorCode::kConfig, "group: generator out of range");
  }
  BigInt check;
  mpz_powm(check.get_mpz_t(), params.g.get_mpz_t(), params.q.get_mpz_t(),
           params.p.get_mpz_t());
  if (check != 1) {
    throw Error(ErrorCode::kConfig, "group: generator does not have order q");
  }
}

FieldParams field_for_group(const GroupParams& group, std::size_t n) {
  BigInt bound = group.q * static_cast<unsigned long>(n);
  FieldParams f;
  mpz_nextprime(f.P.get_mpz_t(), bound.get_mpz_t());
  return f;
}

GroupElement group_identity() { return GroupElement{1}; }

GroupElement group_generator(const GroupParams& params) {
  return GroupElement{params.g};
}

bool is_group_member(const GroupParams& params, const GroupElement& e) {
  if (e.value < 1 || e.value >= params.p) return false;
  // For a safe prime the order-q subgroup is exactly the quadratic residues.
  return mpz_legendre(e.value.get_mpz_t(), params.p.get_mpz_t()) == 1;
}

GroupElement group_exp(const GroupParams& params, const GroupElement& base,
                       const BigInt& e) {
  counters::bump<&OpCounters::group_exp>();
  BigInt reduced;
  mpz_mod(reduced.get_mpz_t(), e.get_mpz_t(), params.q.get_mpz_t());
  GroupElement out;
  mpz_powm(out.value.get_mpz_t(), base.value.get_mpz_t(), reduced.get_mpz_t(),
           params.p.get_mpz_t());
  return out;
}

GroupElement group_mul(const GroupParams& params, const GroupElement& a,
                       const GroupElement& b) {
  counters::bump<&OpCounters::group_mul>();
  GroupElement out;
  mpz_mul(out.value.get_mpz_t(), a.value.get_mpz_t(), b.value.get_mpz_t());
  mpz_mod(out.value.get_mpz_t(), out.value.get_mpz_t(), params.p.get_mpz_t());
  return out;
}

GroupElement group_inv(const GroupParams& params, const GroupElement& a) {
  GroupElement out;
  if (mpz_invert(out.value.get_mpz_t(), a.value.get_mpz_t(),
                 params.p.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kInvalidArgument, "element not invertible");
  }
  return out;
}

GroupElement hash_to_group(const GroupParams& params, std::uint64_t index,
                           ByteSpan domain) {
  const std::size_t want_bits = params.bits() + 64;
  const std::size_t blocks = (want_bits + 255) / 256;
  for (std::uint32_t counter = 0;; ++counter) {
    Bytes expanded;
    expanded.reserve(blocks * 32);
    for (std::uint32_t block = 0; block < blocks; ++block) {
      ByteWriter w;
      w.prefixed(domain).u64(index).u32(counter).u32(block);
      Digest d = sha256(w.bytes());
      expanded.insert(expanded.end(), d.begin(), d.end());
    }
    BigInt x = from_bytes_be(expanded) % params.p;
    GroupElement out;
    mpz_powm_ui(out.value.get_mpz_t(), x.get_mpz_t(), 2, params.p.get_mpz_t());
    if (out.value > 1) return out;
  }
}

FieldElement field_add(const FieldParams& f, const FieldElement& a,
                       const FieldElement& b) {
  FieldElement out{a.value + b.value};
  if (out.value >= f.P) out.value -= f.P;
  return out;
}

FieldElement field_sub(const FieldParams& f, const FieldElement& a,
                       const FieldElement& b) {
  FieldElement out{a.value - b.value};
  if (out.value < 0) out.value += f.P;
  return out;
}

FieldElement field_mul(const FieldParams& f, const FieldElement& a,
                       const FieldElement& b) {
  counters::bump<&OpCounters::field_mul>();
  FieldElement out;
  mpz_mul(out.value.get_mpz_t(), a.value.get_mpz_t(), b.value.get_mpz_t());
  mpz_mod(out.value.get_mpz_t(), out.value.get_mpz_t(), f.P.get_mpz_t());
  return out;
}

FieldElement field_inv(const FieldParams& f, const FieldElement& a) {
  FieldElement out;
  if (mpz_invert(out.value.get_mpz_t(), a.value.get_mpz_t(), f.P.get_mpz_t()) ==
      0) {
    throw Error(ErrorCode::kInvalidArgument, "field element not invertible");
  }
  return out;
}

Bytes to_bytes_be(const BigInt& v) {
  if (v < 0) throw Error(ErrorCode::kInvalidArgument, "negative integer");
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  if (v == 0) return {};
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

BigInt from_bytes_be(ByteSpan data) {
  BigInt out;
  if (!data.empty()) {
    mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  }
  return out;
}

void write_bigint(ByteWriter& w, const BigInt& v) { w.prefixed(to_bytes_be(v)); }

BigInt read_bigint(ByteReader& r) {
  ByteSpan raw = r.prefixed();
  if (!raw.empty() && raw[0] == 0) {
    throw Error(ErrorCode::kMalformed, "non-minimal integer encoding");
  }
  return from_bytes_be(raw);
}

Bytes encode_bigint(const BigInt& v) {
  ByteWriter w;
  write_bigint(w, v);
  return w.take();
}

Bytes encode_group_params(const GroupParams& params) {
  ByteWriter w;
  write_bigint(w, params.p);
  write_bigint(w, params.q);
  write_bigint(w, params.g);
  return w.take();
}

GroupParams decode_group_params(ByteSpan data) {
  ByteReader r(data);
  GroupParams params;
  params.p = read_bigint(r);
  params.q = read_bigint(r);
  params.g = read_bigint(r);
  r.expect_done();
  return params;
}

std::string to_hex(const BigInt& v) { return v.get_str(16); }

}  // namespace hprg_agg
