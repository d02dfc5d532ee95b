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

#include <numeric>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/dlog.hpp"
#include "hprg_agg/errors.hpp"
#include "hprg_agg/rng.hpp"
#include "test_support.hpp"

namespace hprg_agg {
namespace {

using testing::group64;
using testing::toy_group;

GroupElement gpow(const GroupParams& gp, std::uint64_t e) {
  return GroupElement{testing::powmod(gp.g, BigInt(std::to_string(e)), gp.p)};
}

TEST(DlogBruteTest, Examples) {
  const GroupParams gp = toy_group();
  EXPECT_EQ(dlog_bruteforce(gp, group_identity(), 10), 0u);
  EXPECT_EQ(dlog_bruteforce(gp, GroupElement{12}, 10), 5u);
  const GroupParams& big = group64();
  EXPECT_THROW(dlog_bruteforce(big, gpow(big, 101), 100), NotInRange);
}

TEST(DlogLambdaTest, ExhaustiveAgainstBruteForce) {
  const GroupParams& gp = group64();
  const std::uint64_t bound = 1u << 12;
  KangarooSolver solver(gp, bound, 5);
  for (std::uint64_t z = 0; z <= bound; ++z) {
    const GroupElement target = gpow(gp, z);
    ASSERT_EQ(solver.solve(target), z);
  }
  // The brute-force oracle agrees on a sample (it is the slow one).
  for (std::uint64_t z = 0; z <= bound; z += 97) {
    EXPECT_EQ(dlog_bruteforce(gp, gpow(gp, z), bound), z);
  }
}

TEST(DlogLambdaTest, ZeroAndTopOfRange) {
  const GroupParams& gp = group64();
  EXPECT_EQ(dlog_pollard_lambda(gp, group_identity(), 1000, 1), 0u);
  EXPECT_EQ(dlog_pollard_lambda(gp, gpow(gp, 1000), 1000, 1), 1000u);
  EXPECT_EQ(dlog_pollard_lambda(gp, gpow(gp, 3), 3, 1), 3u);
}

TEST(DlogLambdaTest, OutOfRangeAfterRestarts) {
  const GroupParams& gp = group64();
  EXPECT_THROW(dlog_pollard_lambda(gp, gpow(gp, 5000), 1000, 2), NotInRange);
  EXPECT_THROW(dlog_pollard_lambda(gp, gpow(gp, 12), 10, 2), NotInRange);
}

TEST(DlogLambdaTest, ParametersFollowHandbookDefaults) {
  const GroupParams& gp = group64();
  const std::uint64_t bound = 1u << 16;
  KangarooSolver solver(gp, bound, 9);
  // ceil(log2 B / 2) + 2 jumps, each in [1, sqrt B], coprime as a set.
  const auto& jumps = solver.jumps(0);
  EXPECT_EQ(jumps.size(), 10u);
  std::uint64_t g = 0;
  for (std::uint64_t j : jumps) {
    EXPECT_GE(j, 1u);
    EXPECT_LE(j, 256u);
    g = std::gcd(g, j);
  }
  EXPECT_EQ(g, 1u);
  EXPECT_EQ(solver.distinguished_bits(), 6u);
  EXPECT_NE(solver.jumps(1), solver.jumps(0));
}

TEST(DlogLambdaTest, DeterministicPerSeed) {
  const GroupParams& gp = group64();
  OpCounters a, b;
  {
    CounterScope s(&a);
    dlog_pollard_lambda(gp, gpow(gp, 43210), 1u << 16, 77);
  }
  {
    CounterScope s(&b);
    dlog_pollard_lambda(gp, gpow(gp, 43210), 1u << 16, 77);
  }
  EXPECT_EQ(a.dlog_ops, b.dlog_ops);
  EXPECT_GT(a.dlog_ops, 0u);
}

TEST(DlogVectorTest, Examples) {
  const GroupParams& gp = group64();
  const std::vector<GroupElement> small{group_identity(), gpow(gp, 1), gpow(gp, 2)};
  EXPECT_EQ(dlog_vector(gp, small, 4), (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_TRUE(dlog_vector(gp, std::vector<GroupElement>{}, 4).empty());

  Rng rng = Rng::from_u64(8);
  const std::uint64_t bound = 50000;
  std::vector<std::uint64_t> expect;
  std::vector<GroupElement> targets;
  for (int i = 0; i < 100; ++i) {
    expect.push_back(rng.uniform_u64(bound + 1));
    targets.push_back(gpow(gp, expect.back()));
  }
  EXPECT_EQ(dlog_vector(gp, targets, bound, 3), expect);
}

TEST(DlogVectorTest, ReportsFailingComponent) {
  const GroupParams& gp = group64();
  const std::vector<GroupElement> targets{gpow(gp, 1), gpow(gp, 2), gpow(gp, 900)};
  try {
    dlog_vector(gp, targets, 100);
    FAIL() << "expected NotInRange";
  } catch (const NotInRange& e) {
    ASSERT_TRUE(e.component().has_value());
    EXPECT_EQ(*e.component(), 2u);
  }
}

TEST(DlogVectorTest, SharedTameWalkIsCheaperThanFreshSolvers) {
  const GroupParams& gp = group64();
  const std::uint64_t bound = 1u << 16;
  Rng rng = Rng::from_u64(10);
  std::vector<GroupElement> targets;
  for (int i = 0; i < 20; ++i) targets.push_back(gpow(gp, rng.uniform_u64(bound + 1)));
  OpCounters shared, fresh;
  {
    CounterScope s(&shared);
    dlog_vector(gp, targets, bound, 4);
  }
  {
    CounterScope s(&fresh);
    for (const auto& t : targets) dlog_pollard_lambda(gp, t, bound, 4);
  }
  EXPECT_LT(shared.dlog_ops, fresh.dlog_ops);
}

TEST(DlogLambdaTest, OpCountScalesLikeSquareRoot) {
  const GroupParams& gp = group64();
  auto mean_ops = [&](std::uint64_t bound) {
    Rng rng = Rng::from_u64(bound);
    OpCounters ops;
    CounterScope s(&ops);
    const int samples = 60;
    for (int i = 0; i < samples; ++i) {
      dlog_pollard_lambda(gp, gpow(gp, rng.uniform_u64(bound + 1)), bound, rng());
    }
    return static_cast<double>(ops.dlog_ops) / samples;
  };
  const double m12 = mean_ops(1u << 12), m16 = mean_ops(1u << 16), m20 = mean_ops(1u << 20);
  // Theory: x4 per factor 16 in B; allow a factor-2 band.
  EXPECT_GE(m16 / m12, 2.0);
  EXPECT_LE(m16 / m12, 8.0);
  EXPECT_GE(m20 / m16, 2.0);
  EXPECT_LE(m20 / m16, 8.0);
}

}  // namespace
}  // namespace hprg_agg
