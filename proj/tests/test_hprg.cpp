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

#include "hprg_agg/hprg.hpp"
#include "hprg_agg/rng.hpp"
#include "test_support.hpp"

namespace hprg_agg {
namespace {

using testing::group64;
using testing::powmod;
using testing::toy_group;

TEST(HprgTest, ZeroSeedGivesIdentities) {
  const MaskBasis basis = MaskBasis::hashed(group64(), 5);
  for (const GroupElement& e : expand(basis, Seed{0})) EXPECT_EQ(e, group_identity());
}

TEST(HprgTest, ToyGeneratorBasis) {
  // H(j) = 4^j in p = 23: expand(2) = [4^2, 4^4] = [16, 3].
  const MaskBasis basis = MaskBasis::generator_powers(toy_group(), 2);
  const MaskVector r = expand(basis, Seed{2});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].value, 16);
  EXPECT_EQ(r[1].value, 3);
  // y = g^1 * r_1 = 4 * 16 mod 23.
  EXPECT_EQ(group_mul(toy_group(), group_generator(toy_group()), r[0]).value, 18);
}

TEST(HprgTest, MatchesDefinitionElementwise) {
  const GroupParams& gp = group64();
  const BigInt s("1234567");
  const MaskVector r = expand(gp, Seed{s}, 8);
  for (std::size_t j = 0; j < r.size(); ++j) {
    EXPECT_EQ(r[j].value, powmod(hash_to_group(gp, j + 1).value, s, gp.p));
  }
}

TEST(HprgTest, SeedHomomorphismProperty) {
  const GroupParams& gp = group64();
  const MaskBasis basis = MaskBasis::hashed(gp, 64);
  Rng rng = Rng::from_u64(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Seed a{rng.uniform_below(gp.q)}, b{rng.uniform_below(gp.q)};
    const MaskVector ra = expand(basis, a), rb = expand(basis, b);
    const MaskVector rs = expand(basis, Seed{(a.value + b.value) % gp.q});
    for (std::size_t j = 0; j < rs.size(); ++j) {
      ASSERT_EQ(group_mul(gp, ra[j], rb[j]), rs[j]) << "trial " << trial << " j " << j;
    }
  }
}

TEST(HprgTest, DeterministicAndPrefixConsistent) {
  const GroupParams& gp = group64();
  const Seed s{BigInt(987654321)};
  const MaskVector long_r = expand(gp, s, 16);
  EXPECT_EQ(expand(gp, s, 16), long_r);
  for (std::size_t k : {1u, 5u, 16u}) {
    const MaskVector short_r = expand(gp, s, k);
    EXPECT_TRUE(std::equal(short_r.begin(), short_r.end(), long_r.begin()));
  }
}

TEST(HprgTest, SessionDomainsSeparateStreams) {
  const GroupParams& gp = group64();
  const Bytes d1 = session_hash_domain(testing::session("round-1"));
  const Bytes d2 = session_hash_domain(testing::session("round-2"));
  EXPECT_NE(d1, d2);
  const MaskBasis b1 = MaskBasis::hashed(gp, 4, d1), b2 = MaskBasis::hashed(gp, 4, d2);
  const Seed s{BigInt(5)};
  EXPECT_NE(expand(b1, s), expand(b2, s));
  EXPECT_EQ(expand(b1, s), expand(MaskBasis::hashed(gp, 4, d1), s));
}

}  // namespace
}  // namespace hprg_agg
