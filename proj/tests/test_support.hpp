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

#ifndef HPRG_AGG_TESTS_TEST_SUPPORT_HPP_
#define HPRG_AGG_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "hprg_agg/bytes.hpp"
#include "hprg_agg/hprg.hpp"
#include "hprg_agg/modmath.hpp"
#include "hprg_agg/protocol.hpp"
#include "hprg_agg/rng.hpp"

namespace hprg_agg::testing {

// p = 23, q = 11, g = 4.
inline GroupParams toy_group() { return group_params_from_safe_prime(BigInt(23)); }

inline GroupParams group_of_bits(unsigned bits, std::uint64_t seed = 7) {
  ByteWriter w;
  w.u64(seed);
  return gen_group_params(bits, w.bytes());
}

// Cached groups; generating them is cheap but tests ask for them a lot.
inline const GroupParams& group64() {
  static const GroupParams g = group_of_bits(64);
  return g;
}
inline const GroupParams& group256() {
  static const GroupParams g = group_of_bits(256);
  return g;
}

inline Bytes session(std::string_view tag) {
  return Bytes(tag.begin(), tag.end());
}

// Plain modular exponentiation, independent of the library's group code.
inline BigInt powmod(const BigInt& base, const BigInt& e, const BigInt& mod) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return out;
}

// Clients and server wired together by hand, for step-by-step tests.
struct Harness {
  std::shared_ptr<ProtocolConfig> cfg;
  std::vector<PartyKeys> secrets;
  std::shared_ptr<const MaskBasis> basis;
  std::vector<std::unique_ptr<Client>> clients;  // index 0 unused
  std::unique_ptr<Server> server;

  Harness(ProtocolConfig config, const std::map<ClientId, GradientVector>& inputs,
          std::uint64_t seed = 1, bool generator_basis = false) {
    cfg = std::make_shared<ProtocolConfig>(std::move(config));
    Rng rng = Rng::from_u64(seed);
    Rng key_rng = rng.derive("keys");
    secrets = provision_keys(*cfg, key_rng);
    basis = std::make_shared<const MaskBasis>(
        generator_basis ? MaskBasis::generator_powers(cfg->group, cfg->m)
                        : MaskBasis::hashed(cfg->group, cfg->m,
                                            session_hash_domain(cfg->session_id)));
    clients.resize(cfg->n + 1);
    for (ClientId i = 1; i <= cfg->n; ++i) {
      clients[i] = std::make_unique<Client>(cfg, i, secrets[i], inputs.at(i),
                                            rng.derive("c" + std::to_string(i)), basis);
    }
    server = std::make_unique<Server>(cfg, secrets[0], basis, 99);
  }

  Client& client(ClientId i) { return *clients.at(i); }

  // Step 1 for every listed client, relayed to every listed recipient.
  std::vector<EncShare> share_all(const std::vector<ClientId>& senders) {
    std::vector<EncShare> all;
    for (ClientId i : senders) {
      auto out = client(i).step1();
      all.insert(all.end(), out.begin(), out.end());
    }
    return all;
  }

  void deliver(const std::vector<EncShare>& all, const std::vector<ClientId>& to) {
    for (ClientId j : to) {
      std::vector<EncShare> mine;
      for (const auto& s : all) {
        if (s.to == j) mine.push_back(s);
      }
      client(j).receive_shares(mine);
    }
  }
};

inline std::vector<ClientId> ids(std::size_t n) {
  std::vector<ClientId> out;
  for (ClientId i = 1; i <= n; ++i) out.push_back(i);
  return out;
}

}  // namespace hprg_agg::testing

#endif  // HPRG_AGG_TESTS_TEST_SUPPORT_HPP_
