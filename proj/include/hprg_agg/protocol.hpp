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

#ifndef HPRG_AGG_PROTOCOL_HPP_
#define HPRG_AGG_PROTOCOL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hprg_agg/authcrypto.hpp"
#include "hprg_agg/hprg.hpp"
#include "hprg_agg/messages.hpp"
#include "hprg_agg/modmath.hpp"
#include "hprg_agg/rng.hpp"
#include "hprg_agg/shamir.hpp"

namespace hprg_agg {

enum class Mode { kSemiHonest, kMalicious };

std::string_view mode_name(Mode mode);

// Who may deviate from the protocol. Only the last three use Mode::kMalicious.
enum class ThreatModel {
  kSemiHonest,
  kMaliciousClientsHonestServer,
  kHonestClientsMaliciousServer,
  kMaliciousClientsAndServer,
};

// Smallest t for which a roster-splitting server cannot get two rosters
// through the consistency check:
//   semi-honest                      1
//   malicious clients, honest server 2 (any t > 1)
//   honest clients, malicious server floor(n/2) + 1
//   malicious clients and server     floor(2n/3) + 1
std::size_t minimum_threshold(std::size_t n, ThreatModel threat);

// Throws ThresholdTooLow when t is below minimum_threshold(), and
// Error(kConfig) when t is outside 1..n or, with both sides malicious, the
// assumed number of corrupted clients is not below n/3.
void validate_threshold(std::size_t n, std::size_t t, ThreatModel threat,
                        std::size_t malicious_clients = 0);

struct PartyKeys {
  EncKeyPair enc;
  SigKeyPair sig;
};

// Public keys indexed by party id (0 = server).
struct KeyDirectory {
  std::vector<Bytes> cpk;
  std::vector<Bytes> spk;
};

struct ProtocolConfig {
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t m = 0;
  std::uint64_t alpha = 0;  // per-entry plaintext maximum
  Mode mode = Mode::kSemiHonest;
  GroupParams group;
  FieldParams field;
  Bytes session_id;  // fresh per aggregation; mixed into the mask hash
  std::uint64_t round = 0;
  KeyDirectory keys;

  // Checks every structural invariant except the key directory. Throws
  // Error(kConfig) naming the violated constraint.
  void validate() const;
  // Also requires n + 1 well-formed key pairs in the directory.
  void validate_keys() const;

  SessionContext session() const { return {session_id, round}; }
  ShamirConfig shamir() const { return {t, n, field}; }
  std::uint64_t dlog_bound(std::size_t roster_size) const {
    return static_cast<std::uint64_t>(roster_size) * alpha;
  }
};

// Fills in the field as the smallest prime above n * q.
ProtocolConfig make_config(std::size_t n, std::size_t t, std::size_t m,
                           std::uint64_t alpha, Mode mode, GroupParams group,
                           Bytes session_id);

// Generates key pairs for the server (index 0) and clients 1..n and installs
// the public halves into cfg.keys. Returns the secret halves.
std::vector<PartyKeys> provision_keys(ProtocolConfig& cfg, Rng& rng);

using GradientVector = std::vector<std::uint64_t>;

enum class AbortReason {
  kTooFewClients,
  kTooFewAcks,
  kTooFewShares,
  kInconsistentRoster,
  kBadSignature,
  kAuthFailure,
  kMissingShare,
  kMalformedMessage,
  kDlogOutOfRange,
};

std::string_view reason_name(AbortReason reason);

struct Abort {
  AbortReason reason = AbortReason::kTooFewClients;
  int stage = 0;                   // protocol step 1..4
  std::optional<ClientId> party;   // offending party, when known
  std::string detail;

  std::string describe() const;
};

class ProtocolAbort : public std::runtime_error {
 public:
  explicit ProtocolAbort(Abort abort)
      : std::runtime_error(abort.describe()), abort_(std::move(abort)) {}
  const Abort& abort() const noexcept { return abort_; }

 private:
  Abort abort_;
};

// Nested client sets of one round: U4 <= U3 <= U2 <= U1 <= U. In semi-honest
// mode U3 equals U2.
struct Rosters {
  Roster u;
  Roster u1;
  Roster u2;
  Roster u3;
  Roster u4;
};

struct RoundOutcome {
  std::optional<std::vector<std::uint64_t>> output;
  std::optional<Abort> abort;
};

// A sender the server dropped from a roster, and why.
struct Exclusion {
  int step = 0;
  ClientId client = 0;
  AbortReason reason = AbortReason::kBadSignature;
};

class Client {
 public:
  Client(std::shared_ptr<const ProtocolConfig> cfg, ClientId id, PartyKeys keys,
         GradientVector x, Rng rng, std::shared_ptr<const MaskBasis> basis);

  ClientId id() const { return id_; }
  const Seed& seed() const { return seed_; }

  // Step 1: picks s_i in Z_q and emits one encrypted Shamir share per client,
  // itself included.
  std::vector<EncShare> step1();
  // Step 1(c). Throws ProtocolAbort on a bad sigma^1 or a ciphertext that
  // fails authentication.
  void receive_shares(std::span<const EncShare> shares);

  // Step 2: y_i = g^{x_i} * HPRG(s_i).
  Masked step2();

  // Step 3 (malicious): checks sigma^3 and signs the roster it was shown.
  RosterAck acknowledge_roster(const RosterAnnounce& announce);
  // Step 4(a), malicious: requires >= t acks, every one a valid signature by
  // a roster member over the byte-identical roster this client signed.
  void receive_acks(const AckBundle& bundle);
  // Step 4(a), semi-honest: takes the server's U2 list as is.
  void receive_roster(const RosterAnnounce& announce);

  // Step 4(b, c): s_R^i = sum of the shares received from roster members,
  // encrypted to the server. Uses the roster accepted in step 3/4(a).
  UnmaskShare step4();
  UnmaskShare step4(const Roster& roster);

  const std::optional<Roster>& roster() const { return roster_; }

 private:
  [[noreturn]] void abort(AbortReason reason, int stage,
                          std::optional<ClientId> party, std::string detail) const;

  std::shared_ptr<const ProtocolConfig> cfg_;
  ClientId id_;
  PartyKeys keys_;
  GradientVector x_;
  Rng rng_;
  std::shared_ptr<const MaskBasis> basis_;
  Seed seed_;
  std::map<ClientId, FieldElement> received_;
  std::optional<Roster> roster_;
};

class Server {
 public:
  Server(std::shared_ptr<const ProtocolConfig> cfg, PartyKeys keys,
         std::shared_ptr<const MaskBasis> basis, std::uint64_t dlog_seed);

  // Step 1 relay: U1 = senders whose shares address at least t distinct
  // clients. Throws ProtocolAbort(kTooFewClients, 1) when |U1| < t.
  Roster collect_shares(std::span<const EncShare> shares);
  // Step 2: U2 = U1 senders of well-formed (and, malicious, correctly signed)
  // masked vectors.
  Roster collect_masked(std::span<const Masked> masked);
  // The U2 list, signed with the server key in malicious mode.
  RosterAnnounce announce();
  // Signs an arbitrary roster; used by adversarial servers in tests.
  RosterAnnounce announce(const Roster& roster) const;
  // Step 3: U3 = U2 members with a valid sigma^4 over U2.
  Roster collect_acks(std::span<const RosterAck> acks);
  AckBundle ack_bundle() const;
  // Step 4: U4 = eligible senders of valid unmask shares. Reconstructs s_R
  // once, strips R from the product of the U2 masked vectors and solves the
  // bounded logs.
  std::vector<std::uint64_t> unmask(std::span<const UnmaskShare> shares);

  // Decrypts one unmask share with the server key (no roster checks).
  FieldElement open_unmask_share(const UnmaskShare& share) const;

  const Rosters& rosters() const { return rosters_; }
  const std::vector<Exclusion>& exclusions() const { return exclusions_; }

 private:
  [[noreturn]] void abort(AbortReason reason, int stage, std::string detail) const;

  std::shared_ptr<const ProtocolConfig> cfg_;
  PartyKeys keys_;
  std::shared_ptr<const MaskBasis> basis_;
  std::uint64_t dlog_seed_;
  Rosters rosters_;
  std::map<ClientId, std::vector<GroupElement>> masked_;
  std::vector<RosterAck> acks_;
  std::vector<Exclusion> exclusions_;
};

// Trusted-party reference: aborts at the first stage whose roster is below t
// (stage 3 only in malicious mode), otherwise the plain componentwise sum of
// the inputs of U2.
RoundOutcome ideal_aggregate(const std::map<ClientId, GradientVector>& inputs,
                             const Rosters& rosters, std::size_t t, std::size_t m,
                             Mode mode);

}  // namespace hprg_agg

#endif  // HPRG_AGG_PROTOCOL_HPP_
