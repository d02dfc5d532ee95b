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

// hprg-agg: run single aggregation rounds, dropout sweeps and dlog benchmarks
// on the simulated network.
//
// Exit codes: 0 success, 1 configuration error, 2 protocol abort (or an
// oracle mismatch under --verify).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/dlog.hpp"
#include "hprg_agg/errors.hpp"
#include "hprg_agg/modmath.hpp"
#include "hprg_agg/protocol.hpp"
#include "hprg_agg/rng.hpp"
#include "hprg_agg/simnet.hpp"

namespace {

using namespace hprg_agg;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;

struct CommonFlags {
  std::size_t clients = 10;
  std::size_t threshold = 0;  // 0 = floor(2n/3) + 1
  std::size_t vector_len = 8;
  std::uint64_t alpha = 255;
  std::string mode = "semi-honest";
  double dropout_rate = 0.0;
  int dropout_step = 4;
  unsigned group_bits = 256;
  std::uint64_t seed = 1;
  std::string latency = "none";
  std::size_t malicious_clients = 0;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("--clients", f.clients, "number of clients n")->check(CLI::PositiveNumber);
  cmd.add_option("--threshold", f.threshold, "Shamir threshold t (default floor(2n/3)+1)");
  cmd.add_option("--vector-len", f.vector_len, "vector length m")->check(CLI::PositiveNumber);
  cmd.add_option("--alpha", f.alpha, "per-entry maximum");
  cmd.add_option("--mode", f.mode, "semi-honest | malicious")
      ->check(CLI::IsMember({"semi-honest", "malicious"}));
  cmd.add_option("--dropout-rate", f.dropout_rate, "fraction of clients dropped, in [0,1)");
  cmd.add_option("--dropout-step", f.dropout_step, "step (1-4) at which clients drop")
      ->check(CLI::Range(1, 4));
  cmd.add_option("--group-bits", f.group_bits, "bit length of the safe prime p");
  cmd.add_option("--seed", f.seed, "run seed (falls back to HPRG_AGG_SEED)")
      ->envname("HPRG_AGG_SEED");
  cmd.add_option("--latency", f.latency, "lan | wan | none")
      ->check(CLI::IsMember({"lan", "wan", "none"}));
  cmd.add_option("--malicious-clients", f.malicious_clients,
                 "assumed number of corrupted clients (malicious mode)");
}

Mode parse_mode(const std::string& s) {
  return s == "malicious" ? Mode::kMalicious : Mode::kSemiHonest;
}

ProtocolConfig build_config(const CommonFlags& f) {
  const std::size_t t = f.threshold ? f.threshold : 2 * f.clients / 3 + 1;
  ByteWriter seed;
  seed.u64(f.seed);
  GroupParams group = gen_group_params(f.group_bits, seed.bytes());
  ByteWriter sid;
  sid.raw(as_bytes("cli-session")).u64(f.seed);
  ProtocolConfig cfg = make_config(f.clients, t, f.vector_len, f.alpha,
                                   parse_mode(f.mode), std::move(group), sid.take());
  cfg.validate();
  validate_threshold(cfg.n, cfg.t,
                     cfg.mode == Mode::kMalicious ? ThreatModel::kMaliciousClientsAndServer
                                                  : ThreatModel::kSemiHonest,
                     f.malicious_clients);
  return cfg;
}

std::map<ClientId, GradientVector> load_inputs(const std::string& path,
                                               const ProtocolConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read inputs file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("inputs file is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "inputs must be an object of id -> vector");
  std::map<ClientId, GradientVector> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    ClientId id = 0;
    try {
      id = static_cast<ClientId>(std::stoul(it.key()));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, "inputs key is not a client id: " + it.key());
    }
    GradientVector x;
    try {
      x = it.value().get<GradientVector>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kConfig, "inputs for client " + it.key() + " are not integers");
    }
    if (x.size() != cfg.m) {
      throw Error(ErrorCode::kConfig, "inputs for client " + it.key() + " need length m");
    }
    for (auto v : x) {
      if (v > cfg.alpha) {
        throw Error(ErrorCode::kConfig, "input entry exceeds alpha for client " + it.key());
      }
    }
    out[id] = std::move(x);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

int cmd_run(const CommonFlags& f, const std::string& out_path, bool verify,
            const std::string& inputs_path) {
  const ProtocolConfig cfg = build_config(f);
  const auto inputs = inputs_path.empty()
                          ? synthetic_inputs(cfg.n, cfg.m, cfg.alpha, f.seed)
                          : load_inputs(inputs_path, cfg);
  const DropoutSchedule schedule = schedule_for_rate(cfg.n, f.dropout_rate, f.dropout_step);
  RunOptions opts;
  opts.malicious_clients = f.malicious_clients;
  const Transcript tr =
      run_round(cfg, inputs, schedule, LatencyModel::named(f.latency), f.seed, opts);

  int code = tr.outcome.abort ? kExitAbort : kExitOk;
  std::string text = to_json(tr);
  if (verify) {
    const RoundOutcome ideal =
        ideal_aggregate(inputs, tr.rosters, cfg.t, cfg.m, cfg.mode);
    bool match = ideal.output == tr.outcome.output;
    if (match && ideal.abort && tr.outcome.abort) {
      match = ideal.abort->stage == tr.outcome.abort->stage;
    }
    ordered_json j = ordered_json::parse(text);
    j["verify"] = {{"match", match}};
    text = j.dump(2);
    if (!match) {
      std::cerr << "verify: protocol result differs from the ideal aggregate\n";
      code = kExitAbort;
    }
  }
  write_text(out_path, text);
  if (tr.outcome.abort) std::cerr << "abort: " << tr.outcome.abort->describe() << '\n';
  return code;
}

int cmd_sweep(const CommonFlags& f, std::vector<double> rates, int reps,
              const std::string& csv_path) {
  const ProtocolConfig cfg = build_config(f);
  for (double r : rates) (void)schedule_for_rate(cfg.n, r, f.dropout_step);
  SweepOptions opts;
  opts.dropout_step = f.dropout_step;
  opts.latency = LatencyModel::named(f.latency);
  opts.run.malicious_clients = f.malicious_clients;
  const auto rows = run_sweep(cfg, rates, reps, f.seed, opts);
  write_text(csv_path, to_csv(rows));
  return kExitOk;
}

int cmd_bench_dlog(const std::vector<std::uint64_t>& bounds, int samples,
                   unsigned group_bits, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::kConfig, "samples must be >= 1");
  ByteWriter gseed;
  gseed.u64(seed);
  const GroupParams group = gen_group_params(group_bits, gseed.bytes());
  std::cout << "bound,mean_ops,mean_ms,ratio\n";
  double previous = 0;
  for (std::uint64_t bound : bounds) {
    if (bound == 0) throw Error(ErrorCode::kConfig, "bounds must be >= 1");
    if (BigInt(std::to_string(bound)) >= group.q) {
      throw Error(ErrorCode::kConfig, "bound must be below q");
    }
    Rng rng = Rng::from_u64(seed).derive("bench/" + std::to_string(bound));
    OpCounters ops;
    double ms = 0;
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t x = bound == UINT64_MAX ? rng() : rng.uniform_u64(bound + 1);
      const GroupElement target =
          group_exp(group, group_generator(group), BigInt(std::to_string(x)));
      const auto start = std::chrono::steady_clock::now();
      std::uint64_t got = 0;
      {
        CounterScope scope(&ops);
        got = dlog_pollard_lambda(group, target, bound, rng());
      }
      ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
      if (got != x) throw std::runtime_error("dlog returned a wrong logarithm");
    }
    const double mean_ops = static_cast<double>(ops.dlog_ops) / samples;
    std::cout << bound << ',' << mean_ops << ',' << ms / samples << ',';
    if (previous > 0) {
      std::cout << mean_ops / previous;
    }
    std::cout << '\n';
    previous = mean_ops;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HPRG-based dropout-resilient secure aggregation simulator", "hprg-agg"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string out_path, inputs_path;
  bool verify = false;
  CLI::App* run = app.add_subcommand("run", "run one aggregation round, print its transcript");
  add_common(*run, run_flags);
  run->add_option("--out", out_path, "write the transcript JSON here instead of stdout");
  run->add_flag("--verify", verify, "check the output against the ideal aggregate");
  run->add_option("--inputs", inputs_path, "JSON object mapping client id to vector");

  CommonFlags sweep_flags;
  std::vector<double> rates{0, 0.1, 0.2, 0.3};
  int reps = 5;
  std::string csv_path;
  CLI::App* sweep = app.add_subcommand("sweep", "dropout-rate sweep as CSV");
  add_common(*sweep, sweep_flags);
  sweep->add_option("--rates", rates, "comma-separated dropout rates")->delimiter(',');
  sweep->add_option("--reps", reps, "repetitions per rate")->check(CLI::PositiveNumber);
  sweep->add_option("--csv", csv_path, "write the CSV here instead of stdout");

  std::vector<std::uint64_t> bounds{4096, 65536, 1048576};
  int samples = 100;
  unsigned bench_bits = 256;
  std::uint64_t bench_seed = 1;
  CLI::App* bench = app.add_subcommand("bench-dlog", "Pollard lambda cost per bound");
  bench->add_option("--bounds", bounds, "comma-separated bounds")->delimiter(',');
  bench->add_option("--samples", samples, "logs solved per bound");
  bench->add_option("--group-bits", bench_bits, "bit length of the safe prime p");
  bench->add_option("--seed", bench_seed, "seed (falls back to HPRG_AGG_SEED)")
      ->envname("HPRG_AGG_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags, out_path, verify, inputs_path);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, rates, reps, csv_path);
    return cmd_bench_dlog(bounds, samples, bench_bits, bench_seed);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
