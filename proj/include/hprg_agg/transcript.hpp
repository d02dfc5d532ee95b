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

#ifndef HPRG_AGG_TRANSCRIPT_HPP_
#define HPRG_AGG_TRANSCRIPT_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/messages.hpp"
#include "hprg_agg/protocol.hpp"

namespace hprg_agg {

enum class DropPoint { kBeforeSend, kAfterSend };

struct Dropout {
  ClientId client = 0;
  int step = 1;  // 1..4
  DropPoint point = DropPoint::kBeforeSend;
};

// At most one entry per client. Step-3 entries need malicious mode, since
// the semi-honest round has no step-3 traffic.
struct DropoutSchedule {
  std::vector<Dropout> entries;

  // Throws Error(kConfig) on a duplicate client, an id outside 1..n, a step
  // outside 1..4 or a step-3 entry in semi-honest mode.
  void validate(std::size_t n, Mode mode) const;
};

std::string_view drop_point_name(DropPoint p);

// One fixed latency per network hop plus a shared bandwidth.
struct LatencyModel {
  std::string name = "none";
  double latency_ms = 0.0;
  double bandwidth_bytes_per_s = 0.0;  // 0 = unlimited

  static LatencyModel none();
  static LatencyModel lan();  // 3.72 ms, 4.80 Gbit/s
  static LatencyModel wan();  // 211.31 ms, 4.18 Gbit/s
  // "none", "lan" or "wan"; throws Error(kConfig) otherwise.
  static LatencyModel named(std::string_view name);

  double transfer_ms(std::uint64_t bytes) const;
};

// Milliseconds per counted operation, used to turn counters into simulated
// compute time.
struct CostModel {
  double group_exp_ms = 0.35;
  double group_mul_ms = 0.0012;
  double field_mul_ms = 0.0006;
  double dlog_op_ms = 0.0012;
  double sign_ms = 0.03;
  double verify_ms = 0.08;
  double encrypt_ms = 0.06;
  double decrypt_ms = 0.05;

  double cost_ms(const OpCounters& ops) const;
  // Times each primitive in `params` with a short microbenchmark.
  static CostModel calibrate(const GroupParams& params);
};

struct PartyMetrics {
  OpCounters ops;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::array<double, 4> compute_ms{};  // simulated, per step
};

struct Metrics {
  std::vector<PartyMetrics> parties;  // index 0 = server
  std::array<double, 4> step_ms{};
  // Bytes addressed to a party that had dropped or aborted.
  std::uint64_t undelivered_bytes = 0;

  double total_ms() const;
  const PartyMetrics& server() const { return parties.at(0); }
  // Operations the server spent in step 4 (unmasking and dlog).
  OpCounters server_unmask_ops;
};

struct MessageRecord {
  int step = 0;
  ClientId from = 0;
  ClientId to = 0;
  MessageKind kind = MessageKind::kEncShare;
  Bytes wire;
  bool delivered = true;
};

struct ClientAbort {
  ClientId client = 0;
  Abort abort;
};

struct Transcript {
  ProtocolConfig config;
  DropoutSchedule schedule;
  LatencyModel latency;
  std::uint64_t seed = 0;
  Rosters rosters;
  std::vector<MessageRecord> messages;
  Metrics metrics;
  RoundOutcome outcome;  // output xor abort
  std::vector<ClientAbort> client_aborts;
  std::vector<Exclusion> exclusions;
};

// Deterministic JSON rendering (stable key order, base64 message bodies).
std::string to_json(const Transcript& transcript, int indent = 2);

}  // namespace hprg_agg

#endif  // HPRG_AGG_TRANSCRIPT_HPP_
