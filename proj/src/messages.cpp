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

#include "hprg_agg/messages.hpp"

#include <algorithm>

#include "hprg_agg/errors.hpp"

namespace hprg_agg {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void header(ByteWriter& w, const SessionContext& ctx, MessageKind kind) {
  w.u8(static_cast<std::uint8_t>(kind)).prefixed(ctx.session_id).u64(ctx.round);
}

void id_field(ByteWriter& w, ClientId id) {
  ByteWriter inner;
  inner.u32(id);
  w.prefixed(inner.bytes());
}

ClientId read_id(ByteReader& r) {
  ByteReader inner(r.prefixed());
  ClientId id = inner.u32();
  inner.expect_done();
  return id;
}

Bytes roster_bytes(const Roster& roster) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(roster.size()));
  for (ClientId id : roster) w.u32(id);
  return w.take();
}

Roster read_roster(ByteReader& r) {
  ByteReader inner(r.prefixed());
  const std::uint32_t count = inner.u32();
  if (count > inner.remaining() / 4) throw Error(ErrorCode::kMalformed, "roster count");
  Roster roster;
  roster.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    ClientId id = inner.u32();
    if (!roster.empty() && id <= roster.back()) {
      throw Error(ErrorCode::kMalformed, "roster not strictly ascending");
    }
    roster.push_back(id);
  }
  inner.expect_done();
  return roster;
}

bool has_signature(MessageKind kind) { return kind != MessageKind::kAckBundle; }

const Bytes& signature_of(const RoundMessage& msg) {
  static const Bytes kNone;
  return std::visit(Overloaded{
                        [](const AckBundle&) -> const Bytes& { return kNone; },
                        [](const auto& m) -> const Bytes& { return m.sig; },
                    },
                    msg);
}

}  // namespace

Roster normalize_roster(Roster r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::kEncShare: return "EncShare";
    case MessageKind::kMasked: return "Masked";
    case MessageKind::kRosterAnnounce: return "RosterAnnounce";
    case MessageKind::kRosterAck: return "RosterAck";
    case MessageKind::kAckBundle: return "AckBundle";
    case MessageKind::kUnmaskShare: return "UnmaskShare";
  }
  return "Unknown";
}

MessageKind kind_of(const RoundMessage& msg) {
  return std::visit(
      Overloaded{
          [](const EncShare&) { return MessageKind::kEncShare; },
          [](const Masked&) { return MessageKind::kMasked; },
          [](const RosterAnnounce&) { return MessageKind::kRosterAnnounce; },
          [](const RosterAck&) { return MessageKind::kRosterAck; },
          [](const AckBundle&) { return MessageKind::kAckBundle; },
          [](const UnmaskShare&) { return MessageKind::kUnmaskShare; },
      },
      msg);
}

Bytes signed_payload(const SessionContext& ctx, const RoundMessage& msg) {
  ByteWriter w;
  header(w, ctx, kind_of(msg));
  std::visit(Overloaded{
                 [&](const EncShare& m) {
                   id_field(w, m.from);
                   id_field(w, m.to);
                   w.prefixed(m.ciphertext);
                 },
                 [&](const Masked& m) {
                   id_field(w, m.from);
                   ByteWriter ys;
                   ys.u32(static_cast<std::uint32_t>(m.y.size()));
                   for (const GroupElement& e : m.y) write_bigint(ys, e.value);
                   w.prefixed(ys.bytes());
                 },
                 [&](const RosterAnnounce& m) { w.prefixed(roster_bytes(m.roster)); },
                 [&](const RosterAck& m) { id_field(w, m.from); },
                 [&](const AckBundle& m) {
                   ByteWriter acks;
                   acks.u32(static_cast<std::uint32_t>(m.acks.size()));
                   for (const RosterAck& a : m.acks) {
                     id_field(acks, a.from);
                     acks.prefixed(a.sig);
                   }
                   w.prefixed(acks.bytes());
                 },
                 [&](const UnmaskShare& m) {
                   id_field(w, m.from);
                   w.prefixed(m.ciphertext);
                 },
             },
             msg);
  return w.take();
}

Bytes roster_ack_payload(const SessionContext& ctx, const Roster& roster) {
  ByteWriter w;
  header(w, ctx, MessageKind::kRosterAck);
  w.prefixed(roster_bytes(roster));
  return w.take();
}

Bytes encode_message(const SessionContext& ctx, const RoundMessage& msg) {
  ByteWriter w;
  w.raw(signed_payload(ctx, msg));
  if (has_signature(kind_of(msg))) w.prefixed(signature_of(msg));
  return w.take();
}

RoundMessage decode_message(const SessionContext& ctx, ByteSpan wire) {
  ByteReader r(wire);
  const std::uint8_t tag = r.u8();
  if (tag < 1 || tag > 6) throw Error(ErrorCode::kMalformed, "unknown message kind");
  const auto kind = static_cast<MessageKind>(tag);
  ByteSpan sid = r.prefixed();
  if (!std::equal(sid.begin(), sid.end(), ctx.session_id.begin(),
                  ctx.session_id.end())) {
    throw Error(ErrorCode::kMalformed, "foreign session id");
  }
  if (r.u64() != ctx.round) throw Error(ErrorCode::kMalformed, "foreign round");

  auto read_bytes = [&r] {
    ByteSpan s = r.prefixed();
    return Bytes(s.begin(), s.end());
  };
  RoundMessage msg;
  switch (kind) {
    case MessageKind::kEncShare: {
      EncShare m;
      m.from = read_id(r);
      m.to = read_id(r);
      m.ciphertext = read_bytes();
      m.sig = read_bytes();
      msg = std::move(m);
      break;
    }
    case MessageKind::kMasked: {
      Masked m;
      m.from = read_id(r);
      ByteReader ys(r.prefixed());
      const std::uint32_t count = ys.u32();
      if (count > ys.remaining() / 4) throw Error(ErrorCode::kMalformed, "vector count");
      m.y.reserve(count);
      for (std::uint32_t i = 0; i < count; ++i) m.y.push_back(GroupElement{read_bigint(ys)});
      ys.expect_done();
      m.sig = read_bytes();
      msg = std::move(m);
      break;
    }
    case MessageKind::kRosterAnnounce: {
      RosterAnnounce m;
      m.roster = read_roster(r);
      m.sig = read_bytes();
      msg = std::move(m);
      break;
    }
    case MessageKind::kRosterAck: {
      RosterAck m;
      m.from = read_id(r);
      m.sig = read_bytes();
      msg = std::move(m);
      break;
    }
    case MessageKind::kAckBundle: {
      AckBundle m;
      ByteReader acks(r.prefixed());
      const std::uint32_t count = acks.u32();
      if (count > acks.remaining() / 8) throw Error(ErrorCode::kMalformed, "ack count");
      for (std::uint32_t i = 0; i < count; ++i) {
        RosterAck a;
        a.from = read_id(acks);
        ByteSpan s = acks.prefixed();
        a.sig.assign(s.begin(), s.end());
        m.acks.push_back(std::move(a));
      }
      acks.expect_done();
      msg = std::move(m);
      break;
    }
    case MessageKind::kUnmaskShare: {
      UnmaskShare m;
      m.from = read_id(r);
      m.ciphertext = read_bytes();
      m.sig = read_bytes();
      msg = std::move(m);
      break;
    }
  }
  r.expect_done();
  return msg;
}

Bytes ciphertext_aad(const SessionContext& ctx, MessageKind kind, ClientId from,
                     ClientId to) {
  ByteWriter w;
  header(w, ctx, kind);
  w.u32(from).u32(to);
  return w.take();
}

}  // namespace hprg_agg
