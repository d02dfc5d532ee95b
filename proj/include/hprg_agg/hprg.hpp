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

#ifndef HPRG_AGG_HPRG_HPP_
#define HPRG_AGG_HPRG_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "hprg_agg/bytes.hpp"
#include "hprg_agg/modmath.hpp"

namespace hprg_agg {

// Seed in Z_q.
struct Seed {
  BigInt value;
};

using MaskVector = std::vector<GroupElement>;

// The points H(1), ..., H(m) that every expansion raises to the seed. They are
// public and seed-independent, so one basis is computed per session and shared
// by all parties.
class MaskBasis {
 public:
  // Production mode: H(j) = hash_to_group(params, j, domain).
  static MaskBasis hashed(const GroupParams& params, std::size_t m,
                          ByteSpan domain = as_bytes(kDefaultHashDomain));

  // Test mode: H(j) = g^j, for hand-checkable vectors.
  static MaskBasis generator_powers(const GroupParams& params, std::size_t m);

  const GroupParams& params() const { return params_; }
  std::size_t size() const { return points_.size(); }
  // Zero-based: point(0) is H(1).
  const GroupElement& point(std::size_t i) const { return points_.at(i); }

 private:
  MaskBasis(GroupParams params, std::vector<GroupElement> points)
      : params_(std::move(params)), points_(std::move(points)) {}

  GroupParams params_;
  std::vector<GroupElement> points_;
};

// F(s, j) = H(j)^s for j = 1..basis.size().
MaskVector expand(const MaskBasis& basis, const Seed& seed);

// expand() over a freshly hashed basis with the default domain.
MaskVector expand(const GroupParams& params, const Seed& seed, std::size_t m);

// Hash domain for one aggregation session: default tag || session id.
Bytes session_hash_domain(ByteSpan session_id);

}  // namespace hprg_agg

#endif  // HPRG_AGG_HPRG_HPP_
