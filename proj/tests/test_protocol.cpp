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

#include "hprg_agg/counters.hpp"
#include "hprg_agg/errors.hpp"
#include "hprg_agg/protocol.hpp"
#include "hprg_agg/shamir.hpp"
#include "test_support.hpp"

namespace hprg_agg {
namespace {

using testing::group64;
using testing::Harness;
using testing::ids;
using testing::session;

ProtocolConfig config(std::size_t n, std::size_t t, std::size_t m, Mode mode,
                      std::uint64_t alpha = 255) {
  return make_config(n, t, m, alpha, mode, group64(), session("protocol-test"));
}

std::map<ClientId, GradientVector> inputs_of(std::vector<GradientVector> xs) {
  std::map<ClientId, GradientVector> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out[static_cast<ClientId>(i + 1)] = xs[i];
  return out;
}

AbortReason abort_reason(auto&& fn) {
  try {
    fn();
  } catch (const ProtocolAbort& e) {
    return e.abort().reason;
  }
  ADD_FAILURE() << "expected ProtocolAbort";
  return AbortReason::kMalformedMessage;
}

std::size_t required_of(std::size_t n, std::size_t t, ThreatModel m, std::size_t nc = 0) {
  try {
    validate_threshold(n, t, m, nc);
  } catch (const ThresholdTooLow& e) {
    return e.required();
  }
  return 0;
}

TEST(ThresholdTest, Examples) {
  EXPECT_NO_THROW(validate_threshold(4, 3, ThreatModel::kHonestClientsMaliciousServer));
  EXPECT_EQ(required_of(4, 2, ThreatModel::kHonestClientsMaliciousServer), 3u);
  EXPECT_NO_THROW(validate_threshold(6, 5, ThreatModel::kMaliciousClientsAndServer, 1));
  EXPECT_EQ(required_of(6, 4, ThreatModel::kMaliciousClientsAndServer, 1), 5u);
  EXPECT_NO_THROW(validate_threshold(10, 1, ThreatModel::kSemiHonest));
}

TEST(ThresholdTest, MinimumTable) {
  for (std::size_t n = 1; n <= 30; ++n) {
    EXPECT_EQ(minimum_threshold(n, ThreatModel::kSemiHonest), 1u);
    EXPECT_EQ(minimum_threshold(n, ThreatModel::kHonestClientsMaliciousServer), n / 2 + 1);
    EXPECT_EQ(minimum_threshold(n, ThreatModel::kMaliciousClientsAndServer), 2 * n / 3 + 1);
  }
  EXPECT_EQ(minimum_threshold(1, ThreatModel::kMaliciousClientsHonestServer), 1u);
  EXPECT_EQ(minimum_threshold(5, ThreatModel::kMaliciousClientsHonestServer), 2u);
}

TEST(ThresholdTest, RejectsOutOfRangeAndTooManyCorruptions) {
  EXPECT_THROW(validate_threshold(5, 0, ThreatModel::kSemiHonest), Error);
  EXPECT_THROW(validate_threshold(5, 6, ThreatModel::kSemiHonest), Error);
  EXPECT_THROW(validate_threshold(6, 6, ThreatModel::kMaliciousClientsAndServer, 2), Error);
  EXPECT_NO_THROW(validate_threshold(7, 5, ThreatModel::kMaliciousClientsAndServer, 2));
}

TEST(ConfigTest, NamesViolatedConstraint) {
  ProtocolConfig c = make_config(3, 2, 1, 10, Mode::kSemiHonest, testing::toy_group(),
                                 session("x"));
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("q too small: need q > n·alpha"), std::string::npos);
  }
  c = config(3, 2, 1, Mode::kSemiHonest);
  c.field.P = 7;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("field too small"), std::string::npos);
  }
  c = config(3, 2, 1, Mode::kSemiHonest);
  c.session_id.clear();
  EXPECT_THROW(c.validate(), Error);
  EXPECT_NO_THROW(config(3, 2, 1, Mode::kSemiHonest).validate());
}

TEST(ConfigTest, ProvisionedKeysValidate) {
  ProtocolConfig c = config(4, 3, 1, Mode::kMalicious);
  EXPECT_THROW(c.validate_keys(), Error);
  Rng rng = Rng::from_u64(1);
  const auto secrets = provision_keys(c, rng);
  EXPECT_EQ(secrets.size(), 5u);
  EXPECT_NO_THROW(c.validate_keys());
}

TEST(ClientTest, Step1EmitsOneShareEachIncludingSelf) {
  Harness h(config(3, 2, 1, Mode::kMalicious), inputs_of({{1}, {2}, {3}}));
  const auto out = h.client(2).step1();
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(out[k].from, 2u);
    EXPECT_EQ(out[k].to, k + 1);
    EXPECT_TRUE(verify(h.cfg->keys.spk[2], signed_payload(h.cfg->session(), out[k]),
                       out[k].sig));
  }
  // Any 2 of the 3 decrypted shares give back the seed.
  std::vector<Share> shares;
  for (const auto& m : out) {
    shares.push_back(decode_share(decrypt(
        h.secrets[m.to].enc.csk, m.ciphertext,
        ciphertext_aad(h.cfg->session(), MessageKind::kEncShare, m.from, m.to))));
  }
  for (std::size_t skip = 0; skip < 3; ++skip) {
    std::vector<Share> two;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != skip) two.push_back(shares[k]);
    }
    EXPECT_EQ(reconstruct(h.cfg->shamir(), two).value, h.client(2).seed().value);
  }
  EXPECT_LT(h.client(2).seed().value, h.cfg->group.q);
}

TEST(ClientTest, SemiHonestSharesCarryNoSignature) {
  Harness h(config(3, 2, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}}));
  for (const auto& m : h.client(1).step1()) EXPECT_TRUE(m.sig.empty());
}

TEST(ClientTest, ReceiveSharesRejectsForgeryAndTampering) {
  Harness h(config(3, 2, 1, Mode::kMalicious), inputs_of({{1}, {2}, {3}}));
  auto all = h.share_all(ids(3));
  auto for_client = [&](ClientId j) {
    std::vector<EncShare> mine;
    for (const auto& s : all) {
      if (s.to == j) mine.push_back(s);
    }
    return mine;
  };
  auto forged = for_client(1);
  forged[1].sig[5] ^= 1;
  EXPECT_EQ(abort_reason([&] { h.client(1).receive_shares(forged); }),
            AbortReason::kBadSignature);

  // Semi-honest clients skip signatures but still catch AEAD tampering.
  Harness sh(config(3, 2, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}}));
  all = sh.share_all(ids(3));
  auto tampered = for_client(2);
  tampered[0].ciphertext.back() ^= 1;
  EXPECT_EQ(abort_reason([&] { sh.client(2).receive_shares(tampered); }),
            AbortReason::kAuthFailure);
  EXPECT_NO_THROW(sh.client(3).receive_shares(for_client(3)));
}

TEST(ClientTest, Step2MasksWithGeneratorPower) {
  Harness h(config(2, 1, 3, Mode::kSemiHonest), inputs_of({{0, 0, 0}, {1, 2, 3}}));
  h.share_all(ids(2));
  const Masked y1 = h.client(1).step2();
  const MaskVector r1 = expand(*h.basis, h.client(1).seed());
  EXPECT_EQ(y1.y, r1);  // x = 0 leaves only the mask

  const Masked y2 = h.client(2).step2();
  const BigInt& p = h.cfg->group.p;
  for (std::size_t j = 0; j < 3; ++j) {
    const BigInt mask =
        testing::powmod(hash_to_group(h.cfg->group, j + 1,
                                      session_hash_domain(h.cfg->session_id))
                            .value,
                        h.client(2).seed().value, p);
    const BigInt gx = testing::powmod(h.cfg->group.g, BigInt(static_cast<unsigned>(j + 1)), p);
    EXPECT_EQ(y2.y[j].value, gx * mask % p);
  }
}

TEST(ClientTest, RejectsOutOfRangeInputs) {
  auto c = std::make_shared<ProtocolConfig>(config(1, 1, 1, Mode::kSemiHonest, 10));
  Rng rng = Rng::from_u64(1);
  const auto keys = provision_keys(*c, rng);
  auto basis = std::make_shared<const MaskBasis>(MaskBasis::hashed(c->group, 1));
  EXPECT_THROW(Client(c, 1, keys[1], {11}, rng, basis), Error);
  EXPECT_THROW(Client(c, 1, keys[1], {1, 2}, rng, basis), Error);
  EXPECT_THROW(Client(c, 2, keys[1], {1}, rng, basis), Error);
}

// Full round by hand.
struct Round {
  Harness h;
  explicit Round(ProtocolConfig c, std::map<ClientId, GradientVector> x, bool gen = false)
      : h(std::move(c), x, 3, gen) {}

  std::vector<std::uint64_t> run(const std::vector<ClientId>& step2_senders,
                                 const std::vector<ClientId>& step4_senders) {
    const auto all = ids(h.cfg->n);
    const auto shares = h.share_all(all);
    h.server->collect_shares(shares);
    h.deliver(shares, all);
    std::vector<Masked> masked;
    for (ClientId i : step2_senders) masked.push_back(h.client(i).step2());
    h.server->collect_masked(masked);
    if (h.cfg->mode == Mode::kMalicious) {
      const RosterAnnounce a = h.server->announce();
      std::vector<RosterAck> acks;
      for (ClientId i : a.roster) acks.push_back(h.client(i).acknowledge_roster(a));
      h.server->collect_acks(acks);
      for (ClientId i : a.roster) h.client(i).receive_acks(h.server->ack_bundle());
    } else {
      const RosterAnnounce a = h.server->announce();
      for (ClientId i : a.roster) h.client(i).receive_roster(a);
    }
    std::vector<UnmaskShare> unmask;
    for (ClientId i : step4_senders) unmask.push_back(h.client(i).step4());
    return h.server->unmask(unmask);
  }
};

TEST(RoundTest, SingleClientToyGroup) {
  // p = 23, alpha = 10 < q = 11, n = 1.
  ProtocolConfig c = make_config(1, 1, 1, 10, Mode::kSemiHonest, testing::toy_group(),
                                 session("toy"));
  Round r(c, inputs_of({{3}}), true);
  EXPECT_EQ(r.run({1}, {1}), (std::vector<std::uint64_t>{3}));
}

TEST(RoundTest, ThreeClientsNoDropouts) {
  for (Mode mode : {Mode::kSemiHonest, Mode::kMalicious}) {
    Round r(config(3, 2, 2, mode), inputs_of({{1, 2}, {3, 4}, {5, 6}}));
    EXPECT_EQ(r.run({1, 2, 3}, {1, 2, 3}), (std::vector<std::uint64_t>{9, 12}));
    EXPECT_EQ(r.h.server->rosters().u3, (Roster{1, 2, 3}));
  }
}

TEST(RoundTest, DropBeforeStep2ExcludesInputAndMask) {
  Round r(config(4, 2, 2, Mode::kSemiHonest), inputs_of({{1, 2}, {3, 4}, {5, 6}, {7, 8}}));
  EXPECT_EQ(r.run({1, 2, 4}, {1, 2, 4}), (std::vector<std::uint64_t>{11, 14}));
  EXPECT_EQ(r.h.server->rosters().u2, (Roster{1, 2, 4}));
}

TEST(RoundTest, DropAfterStep2StillCountsInput) {
  Round r(config(4, 2, 2, Mode::kMalicious), inputs_of({{1, 2}, {3, 4}, {5, 6}, {7, 8}}));
  EXPECT_EQ(r.run({1, 2, 3, 4}, {1, 3}), (std::vector<std::uint64_t>{16, 20}));
  EXPECT_EQ(r.h.server->rosters().u4, (Roster{1, 3}));
}

TEST(RoundTest, OneReconstructionRegardlessOfDropouts) {
  Round r(config(6, 3, 2, Mode::kSemiHonest),
          inputs_of({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}}));
  OpCounters ops;
  {
    CounterScope scope(&ops);
    EXPECT_EQ(r.run({1, 2, 3, 5}, {2, 3, 5}), (std::vector<std::uint64_t>{11, 11}));
  }
  EXPECT_EQ(ops.reconstructions, 1u);
}

TEST(RoundTest, TooFewSharesAborts) {
  Round r(config(4, 3, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}, {4}}));
  EXPECT_EQ(abort_reason([&] { r.run({1, 2, 3, 4}, {1, 2}); }), AbortReason::kTooFewShares);
}

TEST(ServerTest, BadMaskedSignatureIsExcluded) {
  Harness h(config(5, 3, 1, Mode::kMalicious), inputs_of({{1}, {2}, {3}, {4}, {5}}));
  const auto all = ids(5);
  const auto shares = h.share_all(all);
  h.server->collect_shares(shares);
  h.deliver(shares, all);
  std::vector<Masked> masked;
  for (ClientId i : all) masked.push_back(h.client(i).step2());
  masked[2].sig[0] ^= 1;
  EXPECT_EQ(h.server->collect_masked(masked), (Roster{1, 2, 4, 5}));
  ASSERT_EQ(h.server->exclusions().size(), 1u);
  EXPECT_EQ(h.server->exclusions()[0].client, 3u);
  EXPECT_EQ(h.server->exclusions()[0].reason, AbortReason::kBadSignature);
}

TEST(ServerTest, NoDropoutsGivesU2EqualU1AndAllDroppedAborts) {
  Harness h(config(3, 2, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}}));
  const auto all = ids(3);
  const auto shares = h.share_all(all);
  EXPECT_EQ(h.server->collect_shares(shares), (Roster{1, 2, 3}));
  h.deliver(shares, all);
  std::vector<Masked> masked;
  for (ClientId i : all) masked.push_back(h.client(i).step2());
  EXPECT_EQ(h.server->collect_masked(masked), h.server->rosters().u1);

  Harness empty(config(3, 2, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}}));
  empty.server->collect_shares(empty.share_all(all));
  EXPECT_EQ(abort_reason([&] { empty.server->collect_masked({}); }),
            AbortReason::kTooFewClients);
}

TEST(ServerTest, TooFewShareSendersAbortsAtStep1) {
  Harness h(config(4, 3, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}, {4}}));
  EXPECT_EQ(abort_reason([&] { h.server->collect_shares(h.share_all({1, 2})); }),
            AbortReason::kTooFewClients);
}

TEST(ConsistencyTest, ClientChecksRosterAndAcks) {
  Harness h(config(3, 3, 1, Mode::kMalicious), inputs_of({{1}, {2}, {3}}));
  const auto all = ids(3);
  const auto shares = h.share_all(all);
  h.server->collect_shares(shares);
  h.deliver(shares, all);
  std::vector<Masked> masked;
  for (ClientId i : all) masked.push_back(h.client(i).step2());
  h.server->collect_masked(masked);

  RosterAnnounce a = h.server->announce();
  RosterAnnounce bad = a;
  bad.sig[0] ^= 1;
  EXPECT_EQ(abort_reason([&] { h.client(1).acknowledge_roster(bad); }),
            AbortReason::kBadSignature);
  const RosterAnnounce without_me = h.server->announce(Roster{2, 3});
  EXPECT_EQ(abort_reason([&] { h.client(1).acknowledge_roster(without_me); }),
            AbortReason::kInconsistentRoster);

  std::vector<RosterAck> acks;
  for (ClientId i : all) acks.push_back(h.client(i).acknowledge_roster(a));
  EXPECT_EQ(h.server->collect_acks(acks), (Roster{1, 2, 3}));

  AckBundle short_bundle{{acks[0], acks[1]}};
  EXPECT_EQ(abort_reason([&] { h.client(1).receive_acks(short_bundle); }),
            AbortReason::kTooFewAcks);
  AckBundle forged = h.server->ack_bundle();
  forged.acks[2].sig[3] ^= 1;
  EXPECT_EQ(abort_reason([&] { h.client(2).receive_acks(forged); }),
            AbortReason::kInconsistentRoster);
  AckBundle dup{{acks[0], acks[0], acks[1]}};
  EXPECT_EQ(abort_reason([&] { h.client(3).receive_acks(dup); }),
            AbortReason::kInconsistentRoster);
  EXPECT_NO_THROW(h.client(3).receive_acks(h.server->ack_bundle()));
}

TEST(Step4Test, SelfOnlyRosterAndMissingShare) {
  Harness h(config(3, 1, 1, Mode::kSemiHonest), inputs_of({{1}, {2}, {3}}));
  const auto shares = h.share_all({1, 2});
  h.deliver(shares, {1});
  // With t = 1 every share equals the seed, so s_R^1 over {1} is seed_1.
  const FieldElement opened = h.server->open_unmask_share(h.client(1).step4(Roster{1}));
  EXPECT_EQ(opened.value, h.client(1).seed().value);
  EXPECT_EQ(abort_reason([&] { h.client(1).step4(Roster{1, 3}); }),
            AbortReason::kMissingShare);
}

TEST(IdealTest, Examples) {
  const std::map<ClientId, GradientVector> in{{1, {1}}, {2, {2}}};
  Rosters r{{1, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}};
  EXPECT_EQ(*ideal_aggregate(in, r, 1, 1, Mode::kSemiHonest).output,
            (std::vector<std::uint64_t>{3}));
  r.u2 = r.u3 = r.u4 = {1};
  EXPECT_EQ(*ideal_aggregate(in, r, 1, 1, Mode::kSemiHonest).output,
            (std::vector<std::uint64_t>{1}));
  r = Rosters{{1, 2}, {1}, {1}, {1}, {1}};
  const RoundOutcome o = ideal_aggregate(in, r, 2, 1, Mode::kSemiHonest);
  ASSERT_TRUE(o.abort.has_value());
  EXPECT_FALSE(o.output.has_value());
  EXPECT_EQ(o.abort->stage, 1);
}

TEST(IdealTest, StageThreeOnlyInMaliciousMode) {
  const std::map<ClientId, GradientVector> in{{1, {1}}, {2, {2}}, {3, {3}}};
  const Rosters r{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1}, {1, 2}};
  EXPECT_EQ(ideal_aggregate(in, r, 2, 1, Mode::kMalicious).abort->stage, 3);
  EXPECT_EQ(*ideal_aggregate(in, r, 2, 1, Mode::kSemiHonest).output,
            (std::vector<std::uint64_t>{6}));
}

}  // namespace
}  // namespace hprg_agg
