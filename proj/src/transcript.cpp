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

#include "hprg_agg/transcript.hpp"

#include <chrono>
#include <set>

#include <json.hpp>

#include "hprg_agg/authcrypto.hpp"
#include "hprg_agg/errors.hpp"
#include "hprg_agg/hprg.hpp"
#include "hprg_agg/rng.hpp"

namespace hprg_agg {
namespace {

using nlohmann::ordered_json;

ordered_json counters_json(const OpCounters& c) {
  return ordered_json{{"group_exp", c.group_exp},     {"group_mul", c.group_mul},
                      {"field_mul", c.field_mul},     {"lagrange_mul", c.lagrange_mul},
                      {"reconstructions", c.reconstructions},
                      {"dlog_ops", c.dlog_ops},       {"sign", c.sign},
                      {"verify", c.verify},           {"encrypt", c.encrypt},
                      {"decrypt", c.decrypt}};
}

ordered_json abort_json(const Abort& a) {
  ordered_json j{{"reason", reason_name(a.reason)}, {"stage", a.stage}};
  j["party"] = a.party ? ordered_json(*a.party) : ordered_json(nullptr);
  j["detail"] = a.detail;
  return j;
}

template <class Fn>
double time_ms(int reps, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const std::chrono::duration<double, std::milli> d =
      std::chrono::steady_clock::now() - start;
  return d.count() / reps;
}

}  // namespace

void DropoutSchedule::validate(std::size_t n, Mode mode) const {
  std::set<ClientId> seen;
  for (const Dropout& d : entries) {
    if (d.client == 0 || d.client > n) {
      throw Error(ErrorCode::kConfig, "dropout client id outside 1..n");
    }
    if (!seen.insert(d.client).second) {
      throw Error(ErrorCode::kConfig,
                  "client " + std::to_string(d.client) + " dropped twice");
    }
    if (d.step < 1 || d.step > 4) {
      throw Error(ErrorCode::kConfig, "dropout step must be in 1..4");
    }
    if (d.step == 3 && mode != Mode::kMalicious) {
      throw Error(ErrorCode::kConfig, "step-3 dropouts need malicious mode");
    }
  }
}

std::string_view drop_point_name(DropPoint p) {
  return p == DropPoint::kBeforeSend ? "before-send" : "after-send";
}

LatencyModel LatencyModel::none() { return {}; }
LatencyModel LatencyModel::lan() { return {"lan", 3.72, 4.80e9 / 8}; }
LatencyModel LatencyModel::wan() { return {"wan", 211.31, 4.18e9 / 8}; }

LatencyModel LatencyModel::named(std::string_view name) {
  if (name == "none") return none();
  if (name == "lan") return lan();
  if (name == "wan") return wan();
  throw Error(ErrorCode::kConfig, "latency must be one of lan, wan, none");
}

double LatencyModel::transfer_ms(std::uint64_t bytes) const {
  if (bandwidth_bytes_per_s <= 0) return 0.0;
  return 1000.0 * static_cast<double>(bytes) / bandwidth_bytes_per_s;
}

double CostModel::cost_ms(const OpCounters& o) const {
  return group_exp_ms * o.group_exp + group_mul_ms * o.group_mul +
         field_mul_ms * (o.field_mul + o.lagrange_mul) + dlog_op_ms * o.dlog_ops +
         sign_ms * o.sign + verify_ms * o.verify + encrypt_ms * o.encrypt +
         decrypt_ms * o.decrypt;
}

CostModel CostModel::calibrate(const GroupParams& params) {
  CostModel c;
  Rng rng = Rng::from_u64(0xca11b);
  const GroupElement a = hash_to_group(params, 1);
  const GroupElement b = hash_to_group(params, 2);
  const BigInt e = rng.uniform_below(params.q);
  const FieldParams field = field_for_group(params, 64);
  const FieldElement x{rng.uniform_below(field.P)};
  GroupElement sink = a;
  FieldElement fsink = x;
  c.group_exp_ms = time_ms(64, [&] { sink = group_exp(params, a, e); });
  c.group_mul_ms = time_ms(4096, [&] { sink = group_mul(params, sink, b); });
  c.field_mul_ms = time_ms(4096, [&] { fsink = field_mul(field, fsink, x); });
  c.dlog_op_ms = c.group_mul_ms;
  const SigKeyPair sk = sig_keygen(rng);
  const EncKeyPair ek = enc_keygen(rng);
  const Bytes msg = rng.bytes(128);
  Signature sig;
  c.sign_ms = time_ms(64, [&] { sig = sign(sk.ssk, msg); });
  c.verify_ms = time_ms(64, [&] { (void)verify(sk.spk, msg, sig); });
  Bytes ct;
  c.encrypt_ms = time_ms(64, [&] { ct = encrypt(ek.cpk, msg, rng); });
  c.decrypt_ms = time_ms(64, [&] { (void)decrypt(ek.csk, ct); });
  return c;
}

double Metrics::total_ms() const {
  double t = 0;
  for (double s : step_ms) t += s;
  return t;
}

std::string to_json(const Transcript& tr, int indent) {
  const ProtocolConfig& c = tr.config;
  ordered_json j;
  j["config"] = {{"n", c.n},
                 {"t", c.t},
                 {"m", c.m},
                 {"alpha", c.alpha},
                 {"mode", mode_name(c.mode)},
                 {"group", {{"p", to_hex(c.group.p)}, {"q", to_hex(c.group.q)},
                            {"g", to_hex(c.group.g)}, {"bits", c.group.bits()}}},
                 {"field_P", to_hex(c.field.P)},
                 {"session_id", base64_encode(c.session_id)},
                 {"round", c.round}};
  j["seed"] = tr.seed;
  j["latency"] = {{"name", tr.latency.name},
                  {"latency_ms", tr.latency.latency_ms},
                  {"bandwidth_bytes_per_s", tr.latency.bandwidth_bytes_per_s}};
  ordered_json drops = ordered_json::array();
  for (const Dropout& d : tr.schedule.entries) {
    drops.push_back({{"client", d.client}, {"step", d.step},
                     {"point", drop_point_name(d.point)}});
  }
  j["dropouts"] = drops;
  j["rosters"] = {{"U", tr.rosters.u}, {"U1", tr.rosters.u1}, {"U2", tr.rosters.u2},
                  {"U3", tr.rosters.u3}, {"U4", tr.rosters.u4}};

  ordered_json msgs = ordered_json::array();
  for (const MessageRecord& m : tr.messages) {
    msgs.push_back({{"step", m.step}, {"from", m.from}, {"to", m.to},
                    {"kind", kind_name(m.kind)}, {"delivered", m.delivered},
                    {"wire", base64_encode(m.wire)}});
  }
  j["messages"] = msgs;

  ordered_json parties = ordered_json::array();
  for (std::size_t i = 0; i < tr.metrics.parties.size(); ++i) {
    const PartyMetrics& p = tr.metrics.parties[i];
    parties.push_back({{"party", i}, {"ops", counters_json(p.ops)},
                       {"bytes_sent", p.bytes_sent}, {"bytes_received", p.bytes_received},
                       {"compute_ms", p.compute_ms}});
  }
  j["metrics"] = {{"parties", parties},
                  {"server_unmask_ops", counters_json(tr.metrics.server_unmask_ops)},
                  {"step_ms", tr.metrics.step_ms},
                  {"total_ms", tr.metrics.total_ms()},
                  {"undelivered_bytes", tr.metrics.undelivered_bytes}};

  ordered_json aborts = ordered_json::array();
  for (const ClientAbort& a : tr.client_aborts) {
    ordered_json e = abort_json(a.abort);
    e["client"] = a.client;
    aborts.push_back(e);
  }
  j["client_aborts"] = aborts;
  ordered_json excl = ordered_json::array();
  for (const Exclusion& e : tr.exclusions) {
    excl.push_back({{"step", e.step}, {"client", e.client},
                    {"reason", reason_name(e.reason)}});
  }
  j["exclusions"] = excl;
  j["output"] = tr.outcome.output ? ordered_json(*tr.outcome.output)
                                  : ordered_json(nullptr);
  j["abort"] = tr.outcome.abort ? abort_json(*tr.outcome.abort) : ordered_json(nullptr);
  return j.dump(indent);
}

}  // namespace hprg_agg
