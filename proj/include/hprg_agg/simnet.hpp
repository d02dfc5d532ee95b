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

#ifndef HPRG_AGG_SIMNET_HPP_
#define HPRG_AGG_SIMNET_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hprg_agg/protocol.hpp"
#include "hprg_agg/transcript.hpp"

namespace hprg_agg {

// What an adversary sees once clients have sent their unmask shares.
struct UnmaskView {
  const ProtocolConfig& config;
  const Server& server;
  const MaskBasis& basis;
  std::map<ClientId, std::vector<GroupElement>> masked;  // every y_i received
  std::vector<UnmaskShare> shares;                        // every step-4 share
  // Step-4 share a corrupted client would produce over an arbitrary roster.
  std::function<UnmaskShare(ClientId, const Roster&)> corrupt_unmask;
};

// Hooks a test harness uses to play a malicious server and/or malicious
// clients. The defaults are honest.
class Adversary {
 public:
  virtual ~Adversary() = default;

  // Clients whose secret keys and state the adversary holds.
  virtual std::set<ClientId> corrupted() const { return {}; }
  // True when the server deviates; the simulator then keeps going past the
  // server's own roster checks so the adversary can act on what it gathered.
  virtual bool controls_server() const { return false; }

  virtual void on_setup(const ProtocolConfig& /*cfg*/,
                        std::span<const PartyKeys> /*secrets*/) {}
  // May rewrite any message as it leaves party `from` (0 = server).
  virtual void on_send(int /*step*/, ClientId /*from*/, RoundMessage& /*msg*/) {}
  // Roster the server shows client `to` in step 3 (malicious) or step 4.
  virtual RosterAnnounce roster_for(ClientId /*to*/, const RosterAnnounce& honest,
                                    const Server& /*server*/) {
    return honest;
  }
  // Ack bundle forwarded to client `to`, given every ack the server received.
  virtual AckBundle acks_for(ClientId /*to*/, std::span<const RosterAck> /*received*/,
                             const AckBundle& honest) {
    return honest;
  }
  virtual void observe_unmask(const UnmaskView& /*view*/) {}
};

// Replaces one signature sigma^k (k = step of the signed message, with the
// roster acks as sigma^4) from `party` by flipping a bit. With k = 1 only the
// share addressed to `victim` is touched; with k = 3 only the announcement to
// `victim`.
class SignatureForgery : public Adversary {
 public:
  SignatureForgery(int sigma, ClientId party, ClientId victim = 0)
      : sigma_(sigma), party_(party), victim_(victim) {}
  void on_send(int step, ClientId from, RoundMessage& msg) override;
  RosterAnnounce roster_for(ClientId to, const RosterAnnounce& honest,
                            const Server& server) override;
  bool fired() const { return fired_; }

 private:
  int sigma_;
  ClientId party_;
  ClientId victim_;
  bool fired_ = false;
};

// The roster-splitting server: clients in `group_a` are shown U2 without the
// victim and clients in `group_b` the full U2. Corrupted clients sign both
// rosters. If both views gather t acks and t unmask shares, the two
// reconstructed seed sums differ by exactly the victim's seed, which strips
// the victim's mask from y_victim.
class SplitViewAttack : public Adversary {
 public:
  SplitViewAttack(ClientId victim, std::set<ClientId> group_a,
                  std::set<ClientId> group_b, std::set<ClientId> corrupted = {});

  std::set<ClientId> corrupted() const override { return corrupted_; }
  bool controls_server() const override { return true; }
  void on_setup(const ProtocolConfig& cfg, std::span<const PartyKeys> secrets) override;
  RosterAnnounce roster_for(ClientId to, const RosterAnnounce& honest,
                            const Server& server) override;
  AckBundle acks_for(ClientId to, std::span<const RosterAck> received,
                     const AckBundle& honest) override;
  void observe_unmask(const UnmaskView& view) override;

  // The victim's input vector, when the attack got through.
  const std::optional<std::vector<std::uint64_t>>& recovered() const {
    return recovered_;
  }
  const Roster& roster_a() const { return roster_a_; }
  const Roster& roster_b() const { return roster_b_; }

 private:
  std::optional<BigInt> seed_sum(const UnmaskView& view, const Roster& roster,
                                 const std::set<ClientId>& honest_group) const;

  ClientId victim_;
  std::set<ClientId> group_a_;
  std::set<ClientId> group_b_;
  std::set<ClientId> corrupted_;
  const ProtocolConfig* cfg_ = nullptr;
  std::vector<PartyKeys> secrets_;
  Roster roster_a_;
  Roster roster_b_;
  std::optional<std::vector<std::uint64_t>> recovered_;
};

struct RunOptions {
  // Defaults to the strictest model for the configured mode.
  std::optional<ThreatModel> threat;
  std::size_t malicious_clients = 0;
  bool bypass_threshold_check = false;
  // H(j) = g^j instead of hashed points (hand-checkable vectors).
  bool generator_basis = false;
  bool record_messages = true;
  CostModel cost;
  Adversary* adversary = nullptr;
};

// Runs one aggregation round as four synchronous steps. Keys are provisioned
// from `seed`; an empty session id is derived from it too. Protocol aborts
// land in the transcript; configuration errors throw Error(kConfig) or
// ThresholdTooLow.
Transcript run_round(const ProtocolConfig& config,
                     const std::map<ClientId, GradientVector>& inputs,
                     const DropoutSchedule& schedule, const LatencyModel& latency,
                     std::uint64_t seed, const RunOptions& options = {});

// Vectors drawn uniformly from [0, alpha].
std::map<ClientId, GradientVector> synthetic_inputs(std::size_t n, std::size_t m,
                                                    std::uint64_t alpha,
                                                    std::uint64_t seed);

// Drops the ceil(rate * n) highest-id clients before they send at `step`.
DropoutSchedule schedule_for_rate(std::size_t n, double rate, int step);

struct SweepRow {
  double rate = 0;
  std::size_t clients = 0;
  std::size_t t = 0;
  std::size_t m = 0;
  // Means over repetitions.
  double server_group_mul = 0;
  double server_group_exp = 0;
  double reconstructions = 0;
  double client_bytes = 0;  // bytes sent per surviving client
  double server_bytes = 0;  // bytes sent by the server
  double sim_time_ms = 0;
  double server_unmask_ms = 0;
  std::size_t aborted = 0;  // repetitions that ended in an abort
};

struct SweepOptions {
  int dropout_step = 4;
  LatencyModel latency;
  RunOptions run;
};

// Repetition r of every rate uses the same inputs and seed, so rows differ
// only in the dropouts.
std::vector<SweepRow> run_sweep(const ProtocolConfig& base, std::span<const double> rates,
                                int repetitions, std::uint64_t seed,
                                const SweepOptions& options = {});

std::string to_csv(std::span<const SweepRow> rows);

}  // namespace hprg_agg

#endif  // HPRG_AGG_SIMNET_HPP_
