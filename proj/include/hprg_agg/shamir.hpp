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

#ifndef HPRG_AGG_SHAMIR_HPP_
#define HPRG_AGG_SHAMIR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hprg_agg/bytes.hpp"
#include "hprg_agg/modmath.hpp"
#include "hprg_agg/rng.hpp"

namespace hprg_agg {

// (t, n) Shamir sharing over Z_P. Evaluation points are fixed to 1..n so that
// shares produced by different dealers can be added index-wise.
struct ShamirConfig {
  std::size_t t = 0;
  std::size_t n = 0;
  FieldParams field;

  // Throws Error(kConfig) unless 0 < t <= n < P.
  void validate() const;
};

struct Share {
  std::uint32_t index = 0;  // evaluation point, 1..n
  FieldElement value;

  friend bool operator==(const Share&, const Share&) = default;
};

// Shares of `secret` under a polynomial whose non-constant coefficients are
// uniform in [0, P).
std::vector<Share> share(const ShamirConfig& cfg, const FieldElement& secret,
                         Rng& rng);

// Same as share() with caller-chosen coefficients a_1..a_{t-1}.
std::vector<Share> share_with_coefficients(const ShamirConfig& cfg,
                                           const FieldElement& secret,
                                           std::span<const BigInt> coefficients);

// Lagrange coefficients at zero for the given evaluation points:
// secret = sum_j lambda_j * f(x_j) mod P.
std::vector<FieldElement> precompute_lagrange(
    const ShamirConfig& cfg, std::span<const std::uint32_t> indices);

// Dot product of precomputed bases with share values, in the order given.
FieldElement combine_with_bases(const ShamirConfig& cfg,
                                std::span<const FieldElement> bases,
                                std::span<const Share> shares);

// Interpolates the secret from the t shares with the smallest indices.
// Throws Error(kDuplicateIndex) or Error(kInsufficientShares).
FieldElement reconstruct(const ShamirConfig& cfg, std::span<const Share> shares);

// Index-wise sum; throws Error(kIndexMismatch) if the indices differ.
Share add_shares(const Share& a, const Share& b, const FieldParams& field);

Bytes encode_share(const Share& s);
Share decode_share(ByteSpan data);

}  // namespace hprg_agg

#endif  // HPRG_AGG_SHAMIR_HPP_
