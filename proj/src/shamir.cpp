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

#include "hprg_agg/shamir.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/errors.hpp"

namespace hprg_agg {

void ShamirConfig::validate() const {
  if (t == 0 || t > n) {
    throw Error(ErrorCode::kConfig, "shamir: need 0 < t <= n");
  }
  if (BigInt(static_cast<unsigned long>(n)) >= field.P) {
    throw Error(ErrorCode::kConfig, "shamir: need n < P");
  }
}

std::vector<Share> share_with_coefficients(const ShamirConfig& cfg,
                                           const FieldElement& secret,
                                           std::span<const BigInt> coefficients) {
  if (coefficients.size() + 1 != cfg.t) {
    throw Error(ErrorCode::kInvalidArgument,
                "shamir: need exactly t-1 coefficients");
  }
  if (secret.value < 0 || secret.value >= cfg.field.P) {
    throw Error(ErrorCode::kInvalidArgument, "shamir: secret outside Z_P");
  }
  std::vector<Share> out;
  out.reserve(cfg.n);
  for (std::uint32_t x = 1; x <= cfg.n; ++x) {
    // Horner: a_{t-1} x^{t-2} ... evaluated from the top coefficient down.
    const FieldElement point{x};
    FieldElement acc{0};
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      acc = field_add(cfg.field, acc, FieldElement{*it});
      acc = field_mul(cfg.field, acc, point);
    }
    out.push_back(Share{x, field_add(cfg.field, acc, secret)});
  }
  return out;
}

std::vector<Share> share(const ShamirConfig& cfg, const FieldElement& secret,
                         Rng& rng) {
  std::vector<BigInt> coefficients;
  coefficients.reserve(cfg.t - 1);
  for (std::size_t i = 1; i < cfg.t; ++i) {
    coefficients.push_back(rng.uniform_below(cfg.field.P));
  }
  return share_with_coefficients(cfg, secret, coefficients);
}

std::vector<FieldElement> precompute_lagrange(
    const ShamirConfig& cfg, std::span<const std::uint32_t> indices) {
  std::set<std::uint32_t> seen;
  for (std::uint32_t x : indices) {
    if (!seen.insert(x).second) {
      throw Error(ErrorCode::kDuplicateIndex,
                  "shamir: duplicate index " + std::to_string(x));
    }
    if (x == 0 || x > cfg.n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "shamir: index " + std::to_string(x) + " outside 1..n");
    }
  }
  // lambda_j = prod_{m != j} x_m / (x_m - x_j)
  std::vector<FieldElement> bases;
  bases.reserve(indices.size());
  for (std::uint32_t xj : indices) {
    BigInt num = 1;
    BigInt den = 1;
    for (std::uint32_t xm : indices) {
      if (xm == xj) continue;
      num = (num * xm) % cfg.field.P;
      den = (den * (BigInt(xm) - BigInt(xj))) % cfg.field.P;
      counters::bump<&OpCounters::lagrange_mul>(2);
    }
    if (den < 0) den += cfg.field.P;
    FieldElement inv = field_inv(cfg.field, FieldElement{den});
    bases.push_back(FieldElement{(num * inv.value) % cfg.field.P});
    counters::bump<&OpCounters::lagrange_mul>();
  }
  return bases;
}

FieldElement combine_with_bases(const ShamirConfig& cfg,
                                std::span<const FieldElement> bases,
                                std::span<const Share> shares) {
  if (bases.size() != shares.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "shamir: basis count does not match share count");
  }
  FieldElement acc{0};
  for (std::size_t i = 0; i < shares.size(); ++i) {
    acc = field_add(cfg.field, acc, field_mul(cfg.field, bases[i], shares[i].value));
  }
  return acc;
}

FieldElement reconstruct(const ShamirConfig& cfg, std::span<const Share> shares) {
  std::vector<Share> sorted(shares.begin(), shares.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Share& a, const Share& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].index == sorted[i - 1].index) {
      throw Error(ErrorCode::kDuplicateIndex,
                  "shamir: duplicate index " + std::to_string(sorted[i].index));
    }
  }
  if (sorted.size() < cfg.t) {
    throw Error(ErrorCode::kInsufficientShares,
                "shamir: " + std::to_string(sorted.size()) + " shares, need " +
                    std::to_string(cfg.t));
  }
  sorted.resize(cfg.t);
  std::vector<std::uint32_t> indices;
  indices.reserve(sorted.size());
  for (const Share& s : sorted) indices.push_back(s.index);
  counters::bump<&OpCounters::reconstructions>();
  return combine_with_bases(cfg, precompute_lagrange(cfg, indices), sorted);
}

Share add_shares(const Share& a, const Share& b, const FieldParams& field) {
  if (a.index != b.index) {
    throw Error(ErrorCode::kIndexMismatch,
                "shamir: adding shares at indices " + std::to_string(a.index) +
                    " and " + std::to_string(b.index));
  }
  return Share{a.index, field_add(field, a.value, b.value)};
}

Bytes encode_share(const Share& s) {
  ByteWriter w;
  w.u32(s.index);
  write_bigint(w, s.value.value);
  return w.take();
}

Share decode_share(ByteSpan data) {
  ByteReader r(data);
  Share s;
  s.index = r.u32();
  s.value.value = read_bigint(r);
  r.expect_done();
  return s;
}

}  // namespace hprg_agg
