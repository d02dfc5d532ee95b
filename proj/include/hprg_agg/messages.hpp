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

#ifndef HPRG_AGG_MESSAGES_HPP_
#define HPRG_AGG_MESSAGES_HPP_

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "hprg_agg/bytes.hpp"
#include "hprg_agg/modmath.hpp"

namespace hprg_agg {

// Clients are numbered 1..n and the id doubles as the Shamir evaluation
// point. Party 0 is the server.
using ClientId = std::uint32_t;
inline constexpr ClientId kServerId = 0;

// Always sorted ascending, no duplicates.
using Roster = std::vector<ClientId>;

Roster normalize_roster(Roster r);

// Binds every signed payload and ciphertext to one aggregation.
struct SessionContext {
  Bytes session_id;
  std::uint64_t round = 0;
};

enum class MessageKind : std::uint8_t {
  kEncShare = 1,
  kMasked = 2,
  kRosterAnnounce = 3,
  kRosterAck = 4,
  kAckBundle = 5,
  kUnmaskShare = 6,
};

std::string_view kind_name(MessageKind kind);

// Step 1: Enc(s_i^j, cpk_j), relayed through the server.
struct EncShare {
  ClientId from = 0;
  ClientId to = 0;
  Bytes ciphertext;
  Bytes sig;  // sigma^1, malicious mode only
};

// Step 2: y_i = g^{x_i} * r_i.
struct Masked {
  ClientId from = 0;
  std::vector<GroupElement> y;
  Bytes sig;  // sigma^2
};

// Server's view of U2 (Step 3, or the Step 4 fetch in semi-honest mode).
struct RosterAnnounce {
  Roster roster;
  Bytes sig;  // sigma^3, server signature
};

// sigma^4: a client's signature over the roster it was shown.
struct RosterAck {
  ClientId from = 0;
  Bytes sig;
};

// Server forwards the acks it collected.
struct AckBundle {
  std::vector<RosterAck> acks;
};

// Step 4: Enc(s_R^i, cpk_s).
struct UnmaskShare {
  ClientId from = 0;
  Bytes ciphertext;
  Bytes sig;  // sigma^5
};

using RoundMessage =
    std::variant<EncShare, Masked, RosterAnnounce, RosterAck, AckBundle, UnmaskShare>;

MessageKind kind_of(const RoundMessage& msg);

// Canonical serialization of a message body without its signature:
//   kind tag (1 byte) || session id || round (8 bytes) || fields...
// where the session id and every field carry a 4-byte big-endian length
// prefix. This is exactly what sigma^1, sigma^2, sigma^3 and sigma^5 sign.
Bytes signed_payload(const SessionContext& ctx, const RoundMessage& msg);

// What sigma^4 signs: the RosterAck tag with the roster in place of the body.
Bytes roster_ack_payload(const SessionContext& ctx, const Roster& roster);

// Wire form: signed_payload || length-prefixed signature (signed kinds only).
Bytes encode_message(const SessionContext& ctx, const RoundMessage& msg);
// Throws Error(kMalformed) on bad framing, a foreign session/round, or an
// unsorted roster.
RoundMessage decode_message(const SessionContext& ctx, ByteSpan wire);

// Associated data for share ciphertexts, binding sender and recipient.
Bytes ciphertext_aad(const SessionContext& ctx, MessageKind kind, ClientId from,
                     ClientId to);

}  // namespace hprg_agg

#endif  // HPRG_AGG_MESSAGES_HPP_
