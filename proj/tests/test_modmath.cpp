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

#include <gtest/gtest.h>

#include <set>

#include "hprg_agg/errors.hpp"
#include "hprg_agg/modmath.hpp"
#include "hprg_agg/rng.hpp"
#include "test_support.hpp"

namespace hprg_agg {
namespace {

using testing::powmod;
using testing::toy_group;

// Oracle: order of g modulo p by repeated multiplication.
std::uint64_t brute_order(std::uint64_t g, std::uint64_t p) {
  std::uint64_t acc = g % p;
  for (std::uint64_t k = 1; k < p; ++k) {
    if (acc == 1) return k;
    acc = acc * g % p;
  }
  return 0;
}

bool is_prime_small(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

TEST(GroupParamsTest, SixteenBitPostconditions) {
  const Bytes seed{0x01};
  const GroupParams gp = gen_group_params(16, seed);
  EXPECT_EQ(gp.bits(), 16u);
  EXPECT_EQ(gp.q, (gp.p - 1) / 2);
  EXPECT_TRUE(is_prime_small(gp.p.get_ui()));
  EXPECT_TRUE(is_prime_small(gp.q.get_ui()));
  EXPECT_EQ(powmod(gp.g, gp.q, gp.p), 1);
  EXPECT_NE(gp.g, 1);
  EXPECT_NO_THROW(validate_group_params(gp));
}

TEST(GroupParamsTest, DeterministicPerSeed) {
  const Bytes a{0x01}, b{0x02};
  EXPECT_EQ(gen_group_params(64, a), gen_group_params(64, a));
  EXPECT_EQ(gen_group_params(128, a).bits(), 128u);
  EXPECT_NE(gen_group_params(64, a).p, gen_group_params(64, b).p);
}

TEST(GroupParamsTest, RejectsTinyBitLengths) {
  const Bytes seed{0x01};
  EXPECT_THROW(gen_group_params(6, seed), Error);
  EXPECT_THROW(gen_group_params(15, seed), Error);
}

TEST(GroupParamsTest, SmallSafePrimesMatchBruteForce) {
  // Every safe prime below 64, with g = h^2 for the smallest h whose square
  // is not 1, must generate a subgroup of order exactly q.
  for (std::uint64_t p = 5; p < 64; ++p) {
    if (!is_prime_small(p) || !is_prime_small((p - 1) / 2)) continue;
    const GroupParams gp = group_params_from_safe_prime(BigInt(p));
    std::uint64_t h = 2;
    while (h * h % p == 1) ++h;
    EXPECT_EQ(gp.g, h * h % p) << "p=" << p;
    EXPECT_EQ(brute_order(gp.g.get_ui(), p), (p - 1) / 2) << "p=" << p;
  }
  const GroupParams toy = toy_group();
  EXPECT_EQ(toy.p, 23);
  EXPECT_EQ(toy.q, 11);
  EXPECT_EQ(toy.g, 4);
  EXPECT_THROW(group_params_from_safe_prime(BigInt(29)), Error);
}

TEST(GroupParamsTest, ValidateRejectsBrokenParams) {
  GroupParams gp = toy_group();
  gp.g = 5;  // a non-residue mod 23, order 22
  EXPECT_THROW(validate_group_params(gp), Error);
  gp = toy_group();
  gp.q = 10;
  EXPECT_THROW(validate_group_params(gp), Error);
}

TEST(GroupOpsTest, ToyGroupTable) {
  const GroupParams gp = toy_group();
  const GroupElement g = group_generator(gp);
  EXPECT_EQ(group_exp(gp, g, 0), group_identity());
  EXPECT_EQ(group_exp(gp, g, 2).value, 16);
  EXPECT_EQ(group_exp(gp, g, 3).value, 18);
  EXPECT_EQ(group_mul(gp, GroupElement{16}, GroupElement{18}).value, 12);
  EXPECT_EQ(group_exp(gp, g, 5).value, 12);
}

TEST(GroupOpsTest, ExponentReducedModQ) {
  const GroupParams& gp = testing::group64();
  Rng rng = Rng::from_u64(3);
  const GroupElement g = group_generator(gp);
  for (int i = 0; i < 20; ++i) {
    const BigInt e = rng.uniform_below(gp.q);
    EXPECT_EQ(group_exp(gp, g, e), group_exp(gp, g, e + gp.q));
    EXPECT_EQ(group_exp(gp, g, e), group_exp(gp, g, e + 5 * gp.q));
    EXPECT_EQ(group_exp(gp, g, e - gp.q), group_exp(gp, g, e));
  }
}

TEST(GroupOpsTest, InverseCancels) {
  const GroupParams& gp = testing::group64();
  Rng rng = Rng::from_u64(4);
  for (int i = 0; i < 20; ++i) {
    const GroupElement a = group_exp(gp, group_generator(gp), rng.uniform_below(gp.q));
    EXPECT_EQ(group_mul(gp, a, group_inv(gp, a)), group_identity());
  }
}

TEST(GroupOpsTest, MembershipMatchesEulerCriterion) {
  const GroupParams gp = toy_group();
  for (int v = 1; v < 23; ++v) {
    const bool oracle = powmod(BigInt(v), gp.q, gp.p) == 1;
    EXPECT_EQ(is_group_member(gp, GroupElement{v}), oracle) << v;
  }
  EXPECT_FALSE(is_group_member(gp, GroupElement{0}));
  EXPECT_FALSE(is_group_member(gp, GroupElement{23}));
}

TEST(HashToGroupTest, DeterministicAndInSubgroup) {
  const GroupParams& gp = testing::group64();
  EXPECT_EQ(hash_to_group(gp, 7), hash_to_group(gp, 7));
  EXPECT_NE(hash_to_group(gp, 7), hash_to_group(gp, 8));
  EXPECT_NE(hash_to_group(gp, 7), hash_to_group(gp, 7, as_bytes("other-domain")));
  for (std::uint64_t j = 0; j < 50; ++j) {
    const GroupElement e = hash_to_group(gp, j);
    EXPECT_EQ(powmod(e.value, gp.q, gp.p), 1);
    EXPECT_NE(e, group_identity());
  }
}

TEST(HashToGroupTest, ToyGroupOutputsLieInQrSubgroup) {
  const GroupParams gp = toy_group();
  std::set<int> qr;  // enumerate {h^2 mod 23}
  for (int h = 1; h < 23; ++h) qr.insert(h * h % 23);
  ASSERT_EQ(qr, (std::set<int>{1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18}));
  qr.erase(1);
  for (std::uint64_t j = 1; j <= 100; ++j) {
    const int v = static_cast<int>(hash_to_group(gp, j).value.get_si());
    EXPECT_TRUE(qr.contains(v)) << "index " << j << " gave " << v;
  }
}

TEST(HashToGroupTest, KeyHomomorphism) {
  const GroupParams& gp = testing::group64();
  Rng rng = Rng::from_u64(5);
  for (std::uint64_t j = 1; j <= 10; ++j) {
    const GroupElement h = hash_to_group(gp, j);
    const BigInt s1 = rng.uniform_below(gp.q), s2 = rng.uniform_below(gp.q);
    const BigInt sum = (s1 + s2) % gp.q;
    EXPECT_EQ(group_mul(gp, group_exp(gp, h, s1), group_exp(gp, h, s2)),
              group_exp(gp, h, sum));
  }
}

TEST(FieldTest, Arithmetic) {
  const FieldParams f{BigInt(17)};
  EXPECT_EQ(field_add(f, {BigInt(9)}, {BigInt(10)}).value, 2);
  EXPECT_EQ(field_sub(f, {BigInt(3)}, {BigInt(5)}).value, 15);
  EXPECT_EQ(field_mul(f, {BigInt(5)}, {BigInt(7)}).value, 1);
  EXPECT_EQ(field_inv(f, {BigInt(2)}).value, 9);
  EXPECT_THROW(field_inv(f, {BigInt(0)}), Error);
}

TEST(FieldTest, FieldForGroupIsNextPrimeAboveNQ) {
  const GroupParams gp = toy_group();
  // 3 * 11 = 33; next prime is 37.
  EXPECT_EQ(field_for_group(gp, 3).P, 37);
  EXPECT_EQ(field_for_group(gp, 1).P, 13);
}

TEST(EncodingTest, MinimalBigEndianWithLengthPrefix) {
  EXPECT_EQ(encode_bigint(BigInt(0)), (Bytes{0, 0, 0, 0}));
  EXPECT_EQ(encode_bigint(BigInt(0x0102)), (Bytes{0, 0, 0, 2, 0x01, 0x02}));
  EXPECT_EQ(encode_bigint(BigInt(255)), (Bytes{0, 0, 0, 1, 0xff}));

  const Bytes padded{0, 0, 0, 2, 0x00, 0x05};
  ByteReader r(padded);
  EXPECT_THROW(read_bigint(r), Error);
}

TEST(EncodingTest, RoundTrips) {
  Rng rng = Rng::from_u64(6);
  for (int i = 0; i < 50; ++i) {
    const BigInt v = rng.random_bits(1 + i * 13);
    ByteWriter w;
    write_bigint(w, v);
    ByteReader r(w.bytes());
    EXPECT_EQ(read_bigint(r), v);
    EXPECT_TRUE(r.done());
    EXPECT_EQ(from_bytes_be(to_bytes_be(v)), v);
  }
  const GroupParams& gp = testing::group64();
  EXPECT_EQ(decode_group_params(encode_group_params(gp)), gp);
}

}  // namespace
}  // namespace hprg_agg
