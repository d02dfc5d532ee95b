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

#include "hprg_agg/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <utility>

#include "hprg_agg/dlog.hpp"
#include "hprg_agg/errors.hpp"

namespace hprg_agg {
namespace {

void flip_bit(Bytes& sig) {
  if (sig.empty()) sig.push_back(0);
  sig[0] ^= 0x01;
}

ThreatModel default_threat(Mode mode) {
  return mode == Mode::kMalicious ? ThreatModel::kMaliciousClientsAndServer
                                  : ThreatModel::kSemiHonest;
}

// One round in flight. Each step is split into phases (clients, server,
// clients again); a phase costs the slowest party's compute plus its upload
// time, and one link latency if anything crossed the network.
class Round {
 public:
  Round(const ProtocolConfig& config, const std::map<ClientId, GradientVector>& inputs,
        const DropoutSchedule& schedule, const LatencyModel& latency,
        std::uint64_t seed, const RunOptions& opts)
      : opts_(opts), adv_(opts.adversary) {
    tr_.config = config;
    tr_.schedule = schedule;
    tr_.latency = latency;
    tr_.seed = seed;
    ProtocolConfig& cfg = tr_.config;
    Rng root = Rng::from_u64(seed);
    if (cfg.session_id.empty()) cfg.session_id = root.derive("session").bytes(16);

    cfg.validate();
    if (!opts.bypass_threshold_check) {
      validate_threshold(cfg.n, cfg.t, opts.threat.value_or(default_threat(cfg.mode)),
                         opts.malicious_clients);
    }
    schedule.validate(cfg.n, cfg.mode);
    for (ClientId i = 1; i <= cfg.n; ++i) {
      if (!inputs.contains(i)) {
        throw Error(ErrorCode::kConfig, "no input vector for client " + std::to_string(i));
      }
    }
    for (const Dropout& d : schedule.entries) drops_[d.client] = d;

    Rng key_rng = root.derive("keys");
    std::vector<PartyKeys> secrets = provision_keys(cfg, key_rng);
    cfg_ = std::make_shared<const ProtocolConfig>(cfg);
    basis_ = std::make_shared<const MaskBasis>(
        opts.generator_basis
            ? MaskBasis::generator_powers(cfg.group, cfg.m)
            : MaskBasis::hashed(cfg.group, cfg.m, session_hash_domain(cfg.session_id)));

    server_ = std::make_unique<Server>(cfg_, secrets[0], basis_, root.derive("dlog")());
    clients_.resize(cfg.n + 1);
    active_.assign(cfg.n + 1, true);
    for (ClientId i = 1; i <= cfg.n; ++i) {
      clients_[i] = std::make_unique<Client>(cfg_, i, secrets[i], inputs.at(i),
                                             root.derive("client/" + std::to_string(i)),
                                             basis_);
    }
    tr_.metrics.parties.resize(cfg.n + 1);
    if (adv_) adv_->on_setup(*cfg_, secrets);
  }

  Transcript run() && {
    try {
      step1();
      step2();
      if (cfg_->mode == Mode::kMalicious) step3();
      step4();
    } catch (const ProtocolAbort& e) {
      tr_.outcome.abort = e.abort();
    }
    tr_.rosters = server_->rosters();
    tr_.exclusions = server_->exclusions();
    return std::move(tr_);
  }

 private:
  // -- bookkeeping ---------------------------------------------------------

  void account(ClientId party, int step, const OpCounters& ops) {
    PartyMetrics& pm = tr_.metrics.parties[party];
    pm.ops += ops;
    const double ms = opts_.cost.cost_ms(ops);
    pm.compute_ms[step - 1] += ms;
    phase_ms_[party] += ms;
  }

  template <class F>
  decltype(auto) as_party(ClientId party, int step, F&& f) {
    struct Flush {
      Round* round;
      ClientId party;
      int step;
      OpCounters ops;
      ~Flush() { round->account(party, step, ops); }
    } flush{this, party, step, {}};
    CounterScope scope(&flush.ops);
    return f();
  }

  void end_phase(int step) {
    double slowest = 0;
    for (const auto& [party, ms] : phase_ms_) slowest = std::max(slowest, ms);
    if (phase_network_) slowest += tr_.latency.latency_ms;
    tr_.metrics.step_ms[step - 1] += slowest;
    phase_ms_.clear();
    phase_network_ = false;
  }

  bool alive(ClientId id) const { return id == kServerId || active_[id]; }

  // Returns whether the recipient got it.
  bool transmit(int step, ClientId from, ClientId to, const RoundMessage& msg) {
    Bytes wire = encode_message(cfg_->session(), msg);
    const auto size = static_cast<std::uint64_t>(wire.size());
    tr_.metrics.parties[from].bytes_sent += size;
    phase_ms_[from] += tr_.latency.transfer_ms(size);
    phase_network_ = true;
    const bool delivered = alive(to);
    if (delivered) {
      tr_.metrics.parties[to].bytes_received += size;
    } else {
      tr_.metrics.undelivered_bytes += size;
    }
    if (opts_.record_messages) {
      tr_.messages.push_back({step, from, to, kind_of(msg), std::move(wire), delivered});
    }
    return delivered;
  }

  template <class M>
  M outgoing(int step, ClientId from, M msg) {
    if (!adv_) return msg;
    RoundMessage wrapped = std::move(msg);
    adv_->on_send(step, from, wrapped);
    return std::get<M>(std::move(wrapped));
  }

  void drop_at(int step, DropPoint point) {
    for (const auto& [id, d] : drops_) {
      if (d.step == step && d.point == point) active_[id] = false;
    }
  }

  // Runs a client action; a ProtocolAbort silences that client for good.
  template <class F>
  bool client_try(ClientId id, int step, F&& f) {
    try {
      as_party(id, step, std::forward<F>(f));
      return true;
    } catch (const ProtocolAbort& e) {
      tr_.client_aborts.push_back({id, e.abort()});
      active_[id] = false;
      return false;
    }
  }

  std::vector<ClientId> active_clients() const {
    std::vector<ClientId> out;
    for (ClientId i = 1; i <= cfg_->n; ++i) {
      if (active_[i]) out.push_back(i);
    }
    return out;
  }

  // -- steps ---------------------------------------------------------------

  void step1() {
    drop_at(1, DropPoint::kBeforeSend);
    std::vector<EncShare> sent;
    for (ClientId i : active_clients()) {
      client_try(i, 1, [&] {
        for (EncShare& s : clients_[i]->step1()) {
          s = outgoing(1, i, std::move(s));
          transmit(1, i, kServerId, s);
          sent.push_back(std::move(s));
        }
      });
    }
    drop_at(1, DropPoint::kAfterSend);
    end_phase(1);

    std::map<ClientId, std::vector<EncShare>> inbox;
    as_party(kServerId, 1, [&] {
      const Roster u1 = server_->collect_shares(sent);
      for (EncShare& s : sent) {
        if (!std::binary_search(u1.begin(), u1.end(), s.from)) continue;
        s = outgoing(1, kServerId, std::move(s));
        if (transmit(1, kServerId, s.to, s)) inbox[s.to].push_back(std::move(s));
      }
    });
    end_phase(1);

    for (auto& [id, shares] : inbox) {
      client_try(id, 1, [&] { clients_[id]->receive_shares(shares); });
    }
    end_phase(1);
  }

  void step2() {
    drop_at(2, DropPoint::kBeforeSend);
    std::vector<Masked> sent;
    for (ClientId i : active_clients()) {
      client_try(i, 2, [&] {
        Masked y = outgoing(2, i, clients_[i]->step2());
        transmit(2, i, kServerId, y);
        sent.push_back(std::move(y));
      });
    }
    drop_at(2, DropPoint::kAfterSend);
    end_phase(2);

    as_party(kServerId, 2, [&] { server_->collect_masked(sent); });
    for (const Masked& y : sent) masked_.emplace(y.from, y.y);
    end_phase(2);
  }

  std::map<ClientId, RosterAnnounce> send_rosters(int step) {
    std::map<ClientId, RosterAnnounce> inbox;
    as_party(kServerId, step, [&] {
      const RosterAnnounce honest = server_->announce();
      for (ClientId to : server_->rosters().u2) {
        RosterAnnounce a = adv_ ? adv_->roster_for(to, honest, *server_) : honest;
        a = outgoing(step, kServerId, std::move(a));
        if (transmit(step, kServerId, to, a)) inbox.emplace(to, std::move(a));
      }
    });
    end_phase(step);
    return inbox;
  }

  void step3() {
    drop_at(3, DropPoint::kBeforeSend);
    std::map<ClientId, RosterAnnounce> announced = send_rosters(3);

    std::vector<RosterAck> acks;
    for (auto& [id, a] : announced) {
      if (!active_[id]) continue;
      client_try(id, 3, [&] {
        RosterAck ack = outgoing(3, id, clients_[id]->acknowledge_roster(a));
        transmit(3, id, kServerId, ack);
        acks.push_back(std::move(ack));
      });
    }
    drop_at(3, DropPoint::kAfterSend);
    end_phase(3);

    std::map<ClientId, AckBundle> bundles;
    as_party(kServerId, 3, [&] {
      try {
        server_->collect_acks(acks);
      } catch (const ProtocolAbort& e) {
        // A deviating server ignores its own quorum check.
        if (!adv_ || !adv_->controls_server()) throw;
        deferred_abort_ = e.abort();
      }
      const AckBundle honest = server_->ack_bundle();
      for (const RosterAck& ack : acks) {
        AckBundle b = adv_ ? adv_->acks_for(ack.from, acks, honest) : honest;
        b = outgoing(3, kServerId, std::move(b));
        if (transmit(3, kServerId, ack.from, b)) bundles.emplace(ack.from, std::move(b));
      }
    });
    end_phase(3);

    for (auto& [id, b] : bundles) {
      if (client_try(id, 3, [&] { clients_[id]->receive_acks(b); })) ready_.insert(id);
    }
    end_phase(3);
  }

  void step4() {
    drop_at(4, DropPoint::kBeforeSend);
    if (cfg_->mode == Mode::kSemiHonest) {
      for (auto& [id, a] : send_rosters(4)) {
        if (client_try(id, 4, [&] { clients_[id]->receive_roster(a); })) ready_.insert(id);
      }
    }

    std::vector<UnmaskShare> sent;
    for (ClientId i : ready_) {
      if (!active_[i]) continue;
      client_try(i, 4, [&] {
        UnmaskShare s = outgoing(4, i, clients_[i]->step4());
        transmit(4, i, kServerId, s);
        sent.push_back(std::move(s));
      });
    }
    drop_at(4, DropPoint::kAfterSend);
    end_phase(4);

    if (adv_) {
      const std::set<ClientId> corrupted = adv_->corrupted();
      UnmaskView view{*cfg_, *server_, *basis_, masked_, sent,
                      [&](ClientId id, const Roster& roster) {
                        if (!corrupted.contains(id)) {
                          throw Error(ErrorCode::kInvalidArgument, "client not corrupted");
                        }
                        return clients_[id]->step4(roster);
                      }};
      adv_->observe_unmask(view);
    }
    if (deferred_abort_) throw ProtocolAbort(*deferred_abort_);

    OpCounters before = tr_.metrics.parties[kServerId].ops;
    try {
      tr_.outcome.output = as_party(kServerId, 4, [&] { return server_->unmask(sent); });
    } catch (const ProtocolAbort&) {
      tr_.metrics.server_unmask_ops = tr_.metrics.parties[kServerId].ops - before;
      end_phase(4);
      throw;
    }
    tr_.metrics.server_unmask_ops = tr_.metrics.parties[kServerId].ops - before;
    end_phase(4);
  }

  RunOptions opts_;
  Adversary* adv_;
  Transcript tr_;
  std::shared_ptr<const ProtocolConfig> cfg_;
  std::shared_ptr<const MaskBasis> basis_;
  std::unique_ptr<Server> server_;
  std::vector<std::unique_ptr<Client>> clients_;
  std::vector<bool> active_;
  std::map<ClientId, Dropout> drops_;
  std::set<ClientId> ready_;
  std::map<ClientId, std::vector<GroupElement>> masked_;
  std::optional<Abort> deferred_abort_;
  std::map<ClientId, double> phase_ms_;
  bool phase_network_ = false;
};

}  // namespace

// ---------------------------------------------------------------------------

void SignatureForgery::on_send(int step, ClientId from, RoundMessage& msg) {
  if (fired_ || from != party_) return;
  Bytes* sig = nullptr;
  if (sigma_ == 1 && step == 1) {
    if (auto* m = std::get_if<EncShare>(&msg); m && (victim_ == 0 || m->to == victim_)) {
      sig = &m->sig;
    }
  } else if (sigma_ == 2 && step == 2) {
    if (auto* m = std::get_if<Masked>(&msg)) sig = &m->sig;
  } else if (sigma_ == 4 && step == 3) {
    if (auto* m = std::get_if<RosterAck>(&msg)) sig = &m->sig;
  } else if (sigma_ == 5 && step == 4) {
    if (auto* m = std::get_if<UnmaskShare>(&msg)) sig = &m->sig;
  }
  if (sig) {
    flip_bit(*sig);
    fired_ = true;
  }
}

RosterAnnounce SignatureForgery::roster_for(ClientId to, const RosterAnnounce& honest,
                                            const Server&) {
  if (sigma_ != 3 || fired_ || (victim_ != 0 && to != victim_)) return honest;
  RosterAnnounce forged = honest;
  flip_bit(forged.sig);
  fired_ = true;
  return forged;
}

SplitViewAttack::SplitViewAttack(ClientId victim, std::set<ClientId> group_a,
                                 std::set<ClientId> group_b, std::set<ClientId> corrupted)
    : victim_(victim),
      group_a_(std::move(group_a)),
      group_b_(std::move(group_b)),
      corrupted_(std::move(corrupted)) {}

void SplitViewAttack::on_setup(const ProtocolConfig& cfg,
                               std::span<const PartyKeys> secrets) {
  cfg_ = &cfg;
  secrets_.assign(secrets.begin(), secrets.end());
  recovered_.reset();
}

RosterAnnounce SplitViewAttack::roster_for(ClientId to, const RosterAnnounce& honest,
                                           const Server& server) {
  roster_b_ = honest.roster;
  roster_a_.clear();
  for (ClientId id : roster_b_) {
    if (id != victim_) roster_a_.push_back(id);
  }
  return server.announce(group_a_.contains(to) ? roster_a_ : roster_b_);
}

AckBundle SplitViewAttack::acks_for(ClientId to, std::span<const RosterAck> received,
                                    const AckBundle&) {
  const Roster& roster = group_a_.contains(to) ? roster_a_ : roster_b_;
  const Bytes payload = roster_ack_payload(cfg_->session(), roster);
  std::map<ClientId, RosterAck> acks;
  for (const RosterAck& ack : received) {
    if (std::binary_search(roster.begin(), roster.end(), ack.from) &&
        verify(cfg_->keys.spk.at(ack.from), payload, ack.sig)) {
      acks.emplace(ack.from, ack);
    }
  }
  for (ClientId c : corrupted_) {
    if (std::binary_search(roster.begin(), roster.end(), c) && !acks.contains(c)) {
      acks.emplace(c, RosterAck{c, sign(secrets_.at(c).sig.ssk, payload)});
    }
  }
  AckBundle out;
  for (auto& [id, ack] : acks) out.acks.push_back(std::move(ack));
  return out;
}

std::optional<BigInt> SplitViewAttack::seed_sum(const UnmaskView& view,
                                                const Roster& roster,
                                                const std::set<ClientId>& honest_group) const {
  std::map<ClientId, FieldElement> opened;
  for (const UnmaskShare& s : view.shares) {
    if (!honest_group.contains(s.from) || corrupted_.contains(s.from)) continue;
    try {
      opened.emplace(s.from, view.server.open_unmask_share(s));
    } catch (const Error&) {
    }
  }
  for (ClientId c : corrupted_) {
    try {
      opened.emplace(c, view.server.open_unmask_share(view.corrupt_unmask(c, roster)));
    } catch (const std::exception&) {
    }
  }
  if (opened.size() < view.config.t) return std::nullopt;
  std::vector<Share> shares;
  for (const auto& [id, v] : opened) shares.push_back(Share{id, v});
  return reconstruct(view.config.shamir(), shares).value % view.config.group.q;
}

void SplitViewAttack::observe_unmask(const UnmaskView& view) {
  recovered_.reset();
  auto victim_y = view.masked.find(victim_);
  if (victim_y == view.masked.end()) return;
  const std::optional<BigInt> sum_a = seed_sum(view, roster_a_, group_a_);
  const std::optional<BigInt> sum_b = seed_sum(view, roster_b_, group_b_);
  if (!sum_a || !sum_b) return;

  // S_B - S_A = s_victim, so y_victim * expand(-(S_B - S_A)) = g^{x_victim}.
  const BigInt& q = view.config.group.q;
  BigInt neg = (*sum_a - *sum_b) % q;
  if (neg < 0) neg += q;
  const MaskVector unmask = expand(view.basis, Seed{neg});
  std::vector<GroupElement> plain;
  for (std::size_t j = 0; j < unmask.size(); ++j) {
    plain.push_back(group_mul(view.config.group, victim_y->second[j], unmask[j]));
  }
  try {
    recovered_ = dlog_vector(view.config.group, plain, view.config.alpha);
  } catch (const NotInRange&) {
  }
}

// ---------------------------------------------------------------------------

Transcript run_round(const ProtocolConfig& config,
                     const std::map<ClientId, GradientVector>& inputs,
                     const DropoutSchedule& schedule, const LatencyModel& latency,
                     std::uint64_t seed, const RunOptions& options) {
  return Round(config, inputs, schedule, latency, seed, options).run();
}

std::map<ClientId, GradientVector> synthetic_inputs(std::size_t n, std::size_t m,
                                                    std::uint64_t alpha,
                                                    std::uint64_t seed) {
  Rng rng = Rng::from_u64(seed).derive("inputs");
  std::map<ClientId, GradientVector> out;
  for (ClientId i = 1; i <= n; ++i) {
    GradientVector x(m);
    for (auto& v : x) v = alpha == UINT64_MAX ? rng() : rng.uniform_u64(alpha + 1);
    out.emplace(i, std::move(x));
  }
  return out;
}

DropoutSchedule schedule_for_rate(std::size_t n, double rate, int step) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(ErrorCode::kConfig, "dropout rate must be in [0, 1)");
  }
  const auto count = static_cast<std::size_t>(
      std::ceil(rate * static_cast<double>(n) - 1e-9));
  DropoutSchedule s;
  for (std::size_t k = 0; k < count; ++k) {
    s.entries.push_back({static_cast<ClientId>(n - k), step, DropPoint::kBeforeSend});
  }
  return s;
}

std::vector<SweepRow> run_sweep(const ProtocolConfig& base, std::span<const double> rates,
                                int repetitions, std::uint64_t seed,
                                const SweepOptions& options) {
  if (repetitions < 1) throw Error(ErrorCode::kConfig, "repetitions must be >= 1");
  std::vector<double> sorted(rates.begin(), rates.end());
  std::sort(sorted.begin(), sorted.end());
  RunOptions run = options.run;
  run.record_messages = false;

  std::vector<SweepRow> rows;
  for (double rate : sorted) {
    SweepRow row{rate, base.n, base.t, base.m};
    std::size_t completed = 0;
    const DropoutSchedule schedule = schedule_for_rate(base.n, rate, options.dropout_step);
    for (int r = 0; r < repetitions; ++r) {
      const std::uint64_t rep_seed = Rng::from_u64(seed).derive("rep/" + std::to_string(r))();
      const auto inputs = synthetic_inputs(base.n, base.m, base.alpha, rep_seed);
      const Transcript tr = run_round(base, inputs, schedule, options.latency, rep_seed, run);
      const Metrics& mt = tr.metrics;
      row.server_group_mul += static_cast<double>(mt.server_unmask_ops.group_mul);
      row.server_group_exp += static_cast<double>(mt.server_unmask_ops.group_exp);
      row.server_bytes += static_cast<double>(mt.server().bytes_sent);
      row.sim_time_ms += mt.total_ms();
      row.server_unmask_ms += options.run.cost.cost_ms(mt.server_unmask_ops);
      std::set<ClientId> dropped;
      for (const Dropout& d : schedule.entries) dropped.insert(d.client);
      double bytes = 0;
      for (ClientId i = 1; i <= base.n; ++i) {
        if (!dropped.contains(i)) bytes += static_cast<double>(mt.parties[i].bytes_sent);
      }
      row.client_bytes += bytes / static_cast<double>(base.n - dropped.size());
      if (tr.outcome.abort) {
        ++row.aborted;
      } else {
        row.reconstructions += static_cast<double>(mt.server().ops.reconstructions);
        ++completed;
      }
    }
    const double reps = repetitions;
    row.server_group_mul /= reps;
    row.server_group_exp /= reps;
    row.server_bytes /= reps;
    row.client_bytes /= reps;
    row.sim_time_ms /= reps;
    row.server_unmask_ms /= reps;
    row.reconstructions = completed ? row.reconstructions / completed : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "rate,clients,t,m,server_group_mul,server_group_exp,reconstructions,"
         "client_bytes,server_bytes,sim_time_ms\n";
  out.precision(10);
  for (const SweepRow& r : rows) {
    out << r.rate << ',' << r.clients << ',' << r.t << ',' << r.m << ','
        << r.server_group_mul << ',' << r.server_group_exp << ',' << r.reconstructions
        << ',' << r.client_bytes << ',' << r.server_bytes << ',' << r.sim_time_ms << '\n';
  }
  return out.str();
}

}  // namespace hprg_agg
