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

#include "hprg_agg/protocol.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "hprg_agg/dlog.hpp"
#include "hprg_agg/errors.hpp"

namespace hprg_agg {
namespace {

std::string to_string(const BigInt& v) { return v.get_str(); }

bool contains(const Roster& roster, ClientId id) {
  return std::binary_search(roster.begin(), roster.end(), id);
}

}  // namespace

std::string_view mode_name(Mode mode) {
  return mode == Mode::kMalicious ? "malicious" : "semi-honest";
}

std::size_t minimum_threshold(std::size_t n, ThreatModel threat) {
  switch (threat) {
    case ThreatModel::kSemiHonest:
      return 1;
    case ThreatModel::kMaliciousClientsHonestServer:
      return std::min<std::size_t>(2, n);
    case ThreatModel::kHonestClientsMaliciousServer:
      return n / 2 + 1;
    case ThreatModel::kMaliciousClientsAndServer:
      return 2 * n / 3 + 1;
  }
  return n;
}

void validate_threshold(std::size_t n, std::size_t t, ThreatModel threat,
                        std::size_t malicious_clients) {
  if (t == 0 || t > n) {
    throw Error(ErrorCode::kConfig, "threshold must satisfy 0 < t <= n");
  }
  if (threat == ThreatModel::kMaliciousClientsAndServer &&
      3 * malicious_clients >= n) {
    throw Error(ErrorCode::kConfig,
                "too many malicious clients: need n_c < n/3 (n_c=" +
                    std::to_string(malicious_clients) + ", n=" + std::to_string(n) +
                    ")");
  }
  const std::size_t required = minimum_threshold(n, threat);
  if (t < required) {
    throw ThresholdTooLow(required, "threshold too low: minimum t=" +
                                        std::to_string(required) + " for n=" +
                                        std::to_string(n) + " (got t=" +
                                        std::to_string(t) + ")");
  }
}

void ProtocolConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfig, what); };
  if (n == 0) fail("need at least one client");
  if (t == 0 || t > n) fail("threshold must satisfy 0 < t <= n");
  if (m == 0) fail("vector length must be >= 1");
  if (alpha == 0) fail("alpha must be >= 1");
  if (session_id.empty()) fail("session id must be non-empty");
  if (group.p != 2 * group.q + 1 || group.g <= 1 || group.g >= group.p) {
    fail("group parameters malformed: need p = 2q + 1 and 1 < g < p");
  }
  const BigInt n_big(static_cast<unsigned long>(n));
  BigInt max_sum = n_big * BigInt(std::to_string(alpha));
  if (group.q <= max_sum) {
    fail("q too small: need q > n·alpha (q=" + to_string(group.q) +
         ", n·alpha=" + to_string(max_sum) + ")");
  }
  if (field.P <= n_big * group.q) fail("field too small: need P > n·q");
  if (mpz_probab_prime_p(field.P.get_mpz_t(), 25) == 0) fail("P is not prime");
}

void ProtocolConfig::validate_keys() const {
  if (keys.cpk.size() != n + 1 || keys.spk.size() != n + 1) {
    throw Error(ErrorCode::kConfig, "key directory must hold n + 1 entries");
  }
  for (std::size_t i = 0; i <= n; ++i) {
    if (keys.cpk[i].size() != kEncKeySize || keys.spk[i].size() != kSigKeySize) {
      throw Error(ErrorCode::kConfig,
                  "malformed public key for party " + std::to_string(i));
    }
  }
}

ProtocolConfig make_config(std::size_t n, std::size_t t, std::size_t m,
                           std::uint64_t alpha, Mode mode, GroupParams group,
                           Bytes session_id) {
  ProtocolConfig cfg;
  cfg.n = n;
  cfg.t = t;
  cfg.m = m;
  cfg.alpha = alpha;
  cfg.mode = mode;
  cfg.field = field_for_group(group, n);
  cfg.group = std::move(group);
  cfg.session_id = std::move(session_id);
  return cfg;
}

std::vector<PartyKeys> provision_keys(ProtocolConfig& cfg, Rng& rng) {
  std::vector<PartyKeys> secrets;
  cfg.keys.cpk.clear();
  cfg.keys.spk.clear();
  for (std::size_t i = 0; i <= cfg.n; ++i) {
    Rng party = rng.derive("keys/" + std::to_string(i));
    PartyKeys k{enc_keygen(party), sig_keygen(party)};
    cfg.keys.cpk.push_back(k.enc.cpk);
    cfg.keys.spk.push_back(k.sig.spk);
    secrets.push_back(std::move(k));
  }
  return secrets;
}

std::string_view reason_name(AbortReason reason) {
  switch (reason) {
    case AbortReason::kTooFewClients: return "TooFewClients";
    case AbortReason::kTooFewAcks: return "TooFewAcks";
    case AbortReason::kTooFewShares: return "TooFewShares";
    case AbortReason::kInconsistentRoster: return "InconsistentRoster";
    case AbortReason::kBadSignature: return "BadSignature";
    case AbortReason::kAuthFailure: return "AuthFailure";
    case AbortReason::kMissingShare: return "MissingShare";
    case AbortReason::kMalformedMessage: return "MalformedMessage";
    case AbortReason::kDlogOutOfRange: return "DlogOutOfRange";
  }
  return "Unknown";
}

std::string Abort::describe() const {
  std::string out = std::string(reason_name(reason)) + " at step " +
                    std::to_string(stage);
  if (party) out += " (party " + std::to_string(*party) + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

// ---------------------------------------------------------------------------
// Client

Client::Client(std::shared_ptr<const ProtocolConfig> cfg, ClientId id,
               PartyKeys keys, GradientVector x, Rng rng,
               std::shared_ptr<const MaskBasis> basis)
    : cfg_(std::move(cfg)),
      id_(id),
      keys_(std::move(keys)),
      x_(std::move(x)),
      rng_(std::move(rng)),
      basis_(std::move(basis)) {
  if (id_ == 0 || id_ > cfg_->n) {
    throw Error(ErrorCode::kInvalidArgument, "client id outside 1..n");
  }
  if (x_.size() != cfg_->m) {
    throw Error(ErrorCode::kInvalidArgument, "input vector length != m");
  }
  for (std::uint64_t v : x_) {
    if (v > cfg_->alpha) {
      throw Error(ErrorCode::kInvalidArgument, "input entry exceeds alpha");
    }
  }
  if (basis_->size() != cfg_->m) {
    throw Error(ErrorCode::kInvalidArgument, "mask basis length != m");
  }
}

void Client::abort(AbortReason reason, int stage, std::optional<ClientId> party,
                   std::string detail) const {
  throw ProtocolAbort(Abort{reason, stage, party,
                            "client " + std::to_string(id_) + ": " + detail});
}

std::vector<EncShare> Client::step1() {
  seed_ = Seed{rng_.uniform_below(cfg_->group.q)};
  const ShamirConfig shamir = cfg_->shamir();
  std::vector<Share> shares = share(shamir, FieldElement{seed_.value}, rng_);
  const SessionContext ctx = cfg_->session();
  std::vector<EncShare> out;
  out.reserve(shares.size());
  for (const Share& s : shares) {
    EncShare msg;
    msg.from = id_;
    msg.to = s.index;
    msg.ciphertext = encrypt(cfg_->keys.cpk.at(s.index), encode_share(s), rng_,
                             ciphertext_aad(ctx, MessageKind::kEncShare, id_, s.index));
    if (cfg_->mode == Mode::kMalicious) {
      msg.sig = sign(keys_.sig.ssk, signed_payload(ctx, msg));
    }
    out.push_back(std::move(msg));
  }
  return out;
}

void Client::receive_shares(std::span<const EncShare> shares) {
  const SessionContext ctx = cfg_->session();
  for (const EncShare& msg : shares) {
    if (msg.to != id_ || msg.from == 0 || msg.from > cfg_->n) {
      abort(AbortReason::kMalformedMessage, 1, msg.from, "misaddressed share");
    }
    if (received_.contains(msg.from)) {
      abort(AbortReason::kMalformedMessage, 1, msg.from, "duplicate share");
    }
    if (cfg_->mode == Mode::kMalicious &&
        !verify(cfg_->keys.spk.at(msg.from), signed_payload(ctx, msg), msg.sig)) {
      abort(AbortReason::kBadSignature, 1, msg.from, "sigma^1 does not verify");
    }
    Share s;
    try {
      s = decode_share(decrypt(keys_.enc.csk, msg.ciphertext,
                               ciphertext_aad(ctx, MessageKind::kEncShare, msg.from,
                                              id_)));
    } catch (const Error& e) {
      abort(e.code() == ErrorCode::kAuthFailure ? AbortReason::kAuthFailure
                                                : AbortReason::kMalformedMessage,
            1, msg.from, e.what());
    }
    if (s.index != id_ || s.value.value >= cfg_->field.P) {
      abort(AbortReason::kMalformedMessage, 1, msg.from, "share for another index");
    }
    received_.emplace(msg.from, s.value);
  }
}

Masked Client::step2() {
  const MaskVector r = expand(*basis_, seed_);
  const GroupElement g = group_generator(cfg_->group);
  Masked msg;
  msg.from = id_;
  msg.y.reserve(cfg_->m);
  for (std::size_t j = 0; j < cfg_->m; ++j) {
    msg.y.push_back(group_mul(cfg_->group,
                              group_exp(cfg_->group, g, BigInt(std::to_string(x_[j]))),
                              r[j]));
  }
  if (cfg_->mode == Mode::kMalicious) {
    msg.sig = sign(keys_.sig.ssk, signed_payload(cfg_->session(), msg));
  }
  return msg;
}

RosterAck Client::acknowledge_roster(const RosterAnnounce& announce) {
  const SessionContext ctx = cfg_->session();
  if (!verify(cfg_->keys.spk.at(kServerId), signed_payload(ctx, announce),
              announce.sig)) {
    abort(AbortReason::kBadSignature, 3, kServerId, "sigma^3 does not verify");
  }
  if (!contains(announce.roster, id_)) {
    abort(AbortReason::kInconsistentRoster, 3, kServerId, "not in announced roster");
  }
  if (announce.roster.size() < cfg_->t) {
    abort(AbortReason::kTooFewClients, 3, kServerId, "announced roster below t");
  }
  roster_ = announce.roster;
  return RosterAck{id_, sign(keys_.sig.ssk, roster_ack_payload(ctx, *roster_))};
}

void Client::receive_acks(const AckBundle& bundle) {
  if (!roster_) {
    abort(AbortReason::kInconsistentRoster, 3, kServerId, "no roster acknowledged");
  }
  const Bytes payload = roster_ack_payload(cfg_->session(), *roster_);
  std::set<ClientId> signers;
  for (const RosterAck& ack : bundle.acks) {
    if (!contains(*roster_, ack.from) || !signers.insert(ack.from).second) {
      abort(AbortReason::kInconsistentRoster, 3, ack.from,
            "ack from outside the roster or repeated");
    }
    if (!verify(cfg_->keys.spk.at(ack.from), payload, ack.sig)) {
      abort(AbortReason::kInconsistentRoster, 3, ack.from,
            "sigma^4 is not a signature over this roster");
    }
  }
  if (signers.size() < cfg_->t) {
    abort(AbortReason::kTooFewAcks, 3, kServerId,
          std::to_string(signers.size()) + " valid acks, need " +
              std::to_string(cfg_->t));
  }
}

void Client::receive_roster(const RosterAnnounce& announce) {
  if (!contains(announce.roster, id_)) {
    abort(AbortReason::kInconsistentRoster, 4, kServerId, "not in announced roster");
  }
  roster_ = announce.roster;
}

UnmaskShare Client::step4() {
  if (!roster_) {
    abort(AbortReason::kInconsistentRoster, 4, kServerId, "no roster received");
  }
  return step4(*roster_);
}

UnmaskShare Client::step4(const Roster& roster) {
  FieldElement sum{0};
  for (ClientId j : roster) {
    auto it = received_.find(j);
    if (it == received_.end()) {
      abort(AbortReason::kMissingShare, 4, j, "no share received from roster member");
    }
    sum = field_add(cfg_->field, sum, it->second);
  }
  const SessionContext ctx = cfg_->session();
  UnmaskShare msg;
  msg.from = id_;
  msg.ciphertext = encrypt(cfg_->keys.cpk.at(kServerId), encode_bigint(sum.value),
                           rng_,
                           ciphertext_aad(ctx, MessageKind::kUnmaskShare, id_, kServerId));
  if (cfg_->mode == Mode::kMalicious) {
    msg.sig = sign(keys_.sig.ssk, signed_payload(ctx, msg));
  }
  return msg;
}

// ---------------------------------------------------------------------------
// Server

Server::Server(std::shared_ptr<const ProtocolConfig> cfg, PartyKeys keys,
               std::shared_ptr<const MaskBasis> basis, std::uint64_t dlog_seed)
    : cfg_(std::move(cfg)),
      keys_(std::move(keys)),
      basis_(std::move(basis)),
      dlog_seed_(dlog_seed) {
  for (ClientId i = 1; i <= cfg_->n; ++i) rosters_.u.push_back(i);
}

void Server::abort(AbortReason reason, int stage, std::string detail) const {
  throw ProtocolAbort(Abort{reason, stage, std::nullopt, "server: " + detail});
}

Roster Server::collect_shares(std::span<const EncShare> shares) {
  std::map<ClientId, std::set<ClientId>> recipients;
  for (const EncShare& msg : shares) {
    if (msg.from == 0 || msg.from > cfg_->n || msg.to == 0 || msg.to > cfg_->n) {
      continue;
    }
    recipients[msg.from].insert(msg.to);
  }
  Roster u1;
  for (const auto& [from, to] : recipients) {
    if (to.size() >= cfg_->t) u1.push_back(from);
  }
  rosters_.u1 = u1;
  if (u1.size() < cfg_->t) {
    abort(AbortReason::kTooFewClients, 1,
          "|U1| = " + std::to_string(u1.size()) + " < t");
  }
  return u1;
}

Roster Server::collect_masked(std::span<const Masked> masked) {
  const SessionContext ctx = cfg_->session();
  Roster u2;
  for (const Masked& msg : masked) {
    if (!contains(rosters_.u1, msg.from) || masked_.contains(msg.from)) continue;
    bool well_formed = msg.y.size() == cfg_->m;
    for (std::size_t j = 0; well_formed && j < msg.y.size(); ++j) {
      well_formed = is_group_member(cfg_->group, msg.y[j]);
    }
    if (!well_formed) {
      exclusions_.push_back({2, msg.from, AbortReason::kMalformedMessage});
      continue;
    }
    if (cfg_->mode == Mode::kMalicious &&
        !verify(cfg_->keys.spk.at(msg.from), signed_payload(ctx, msg), msg.sig)) {
      exclusions_.push_back({2, msg.from, AbortReason::kBadSignature});
      continue;
    }
    masked_.emplace(msg.from, msg.y);
    u2.push_back(msg.from);
  }
  rosters_.u2 = normalize_roster(std::move(u2));
  if (cfg_->mode == Mode::kSemiHonest) rosters_.u3 = rosters_.u2;
  if (rosters_.u2.size() < cfg_->t) {
    abort(AbortReason::kTooFewClients, 2,
          "|U2| = " + std::to_string(rosters_.u2.size()) + " < t");
  }
  return rosters_.u2;
}

RosterAnnounce Server::announce() { return announce(rosters_.u2); }

RosterAnnounce Server::announce(const Roster& roster) const {
  RosterAnnounce msg;
  msg.roster = normalize_roster(roster);
  if (cfg_->mode == Mode::kMalicious) {
    msg.sig = sign(keys_.sig.ssk, signed_payload(cfg_->session(), msg));
  }
  return msg;
}

Roster Server::collect_acks(std::span<const RosterAck> acks) {
  const Bytes payload = roster_ack_payload(cfg_->session(), rosters_.u2);
  Roster u3;
  acks_.clear();
  for (const RosterAck& ack : acks) {
    if (!contains(rosters_.u2, ack.from) ||
        std::find(u3.begin(), u3.end(), ack.from) != u3.end()) {
      continue;
    }
    if (!verify(cfg_->keys.spk.at(ack.from), payload, ack.sig)) {
      exclusions_.push_back({3, ack.from, AbortReason::kBadSignature});
      continue;
    }
    u3.push_back(ack.from);
    acks_.push_back(ack);
  }
  rosters_.u3 = normalize_roster(std::move(u3));
  std::sort(acks_.begin(), acks_.end(),
            [](const RosterAck& a, const RosterAck& b) { return a.from < b.from; });
  if (rosters_.u3.size() < cfg_->t) {
    abort(AbortReason::kTooFewClients, 3,
          "|U3| = " + std::to_string(rosters_.u3.size()) + " < t");
  }
  return rosters_.u3;
}

AckBundle Server::ack_bundle() const { return AckBundle{acks_}; }

FieldElement Server::open_unmask_share(const UnmaskShare& share) const {
  Bytes plain = decrypt(keys_.enc.csk, share.ciphertext,
                        ciphertext_aad(cfg_->session(), MessageKind::kUnmaskShare,
                                       share.from, kServerId));
  ByteReader r(plain);
  FieldElement v{read_bigint(r)};
  r.expect_done();
  if (v.value >= cfg_->field.P) {
    throw Error(ErrorCode::kMalformed, "unmask share outside Z_P");
  }
  return v;
}

std::vector<std::uint64_t> Server::unmask(std::span<const UnmaskShare> shares) {
  const SessionContext ctx = cfg_->session();
  const Roster& eligible =
      cfg_->mode == Mode::kMalicious ? rosters_.u3 : rosters_.u2;
  std::vector<Share> valid;
  Roster u4;
  for (const UnmaskShare& msg : shares) {
    if (!contains(eligible, msg.from) ||
        std::find(u4.begin(), u4.end(), msg.from) != u4.end()) {
      continue;
    }
    if (cfg_->mode == Mode::kMalicious &&
        !verify(cfg_->keys.spk.at(msg.from), signed_payload(ctx, msg), msg.sig)) {
      exclusions_.push_back({4, msg.from, AbortReason::kBadSignature});
      continue;
    }
    try {
      valid.push_back(Share{msg.from, open_unmask_share(msg)});
    } catch (const Error& e) {
      exclusions_.push_back({4, msg.from,
                             e.code() == ErrorCode::kAuthFailure
                                 ? AbortReason::kAuthFailure
                                 : AbortReason::kMalformedMessage});
      continue;
    }
    u4.push_back(msg.from);
  }
  rosters_.u4 = normalize_roster(std::move(u4));
  if (rosters_.u4.size() < cfg_->t) {
    abort(AbortReason::kTooFewShares, 4,
          "|U4| = " + std::to_string(rosters_.u4.size()) + " < t");
  }

  // s_R is an integer sum of < n seeds below q, so with P > n*q the value
  // reconstructed mod P is exact and reducing it mod q is sound.
  const FieldElement s_r = reconstruct(cfg_->shamir(), valid);
  BigInt neg_seed = cfg_->group.q - (s_r.value % cfg_->group.q);
  const MaskVector r_inv = expand(*basis_, Seed{neg_seed});

  const GroupParams& group = cfg_->group;
  const Roster& members = rosters_.u2;
  std::vector<GroupElement> product = masked_.at(members.front());
  for (std::size_t k = 1; k < members.size(); ++k) {
    const auto& y = masked_.at(members[k]);
    for (std::size_t j = 0; j < cfg_->m; ++j) product[j] = group_mul(group, product[j], y[j]);
  }
  for (std::size_t j = 0; j < cfg_->m; ++j) product[j] = group_mul(group, product[j], r_inv[j]);

  try {
    return dlog_vector(group, product, cfg_->dlog_bound(members.size()), dlog_seed_);
  } catch (const NotInRange& e) {
    abort(AbortReason::kDlogOutOfRange, 4, e.what());
  }
}

// ---------------------------------------------------------------------------

RoundOutcome ideal_aggregate(const std::map<ClientId, GradientVector>& inputs,
                             const Rosters& rosters, std::size_t t, std::size_t m,
                             Mode mode) {
  auto abort_at = [](int stage, AbortReason reason, std::size_t size) {
    return RoundOutcome{std::nullopt,
                        Abort{reason, stage, std::nullopt,
                              "ideal: roster of size " + std::to_string(size) +
                                  " below t"}};
  };
  if (rosters.u1.size() < t) return abort_at(1, AbortReason::kTooFewClients, rosters.u1.size());
  if (rosters.u2.size() < t) return abort_at(2, AbortReason::kTooFewClients, rosters.u2.size());
  if (mode == Mode::kMalicious && rosters.u3.size() < t) {
    return abort_at(3, AbortReason::kTooFewClients, rosters.u3.size());
  }
  if (rosters.u4.size() < t) return abort_at(4, AbortReason::kTooFewShares, rosters.u4.size());

  std::vector<std::uint64_t> sum(m, 0);
  for (ClientId id : rosters.u2) {
    const GradientVector& x = inputs.at(id);
    for (std::size_t j = 0; j < m; ++j) sum[j] += x.at(j);
  }
  return RoundOutcome{std::move(sum), std::nullopt};
}

}  // namespace hprg_agg
