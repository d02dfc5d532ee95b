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

#include "hprg_agg/hprg.hpp"

#include "hprg_agg/errors.hpp"

namespace hprg_agg {

MaskBasis MaskBasis::hashed(const GroupParams& params, std::size_t m,
                            ByteSpan domain) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "hprg: m must be >= 1");
  std::vector<GroupElement> points;
  points.reserve(m);
  for (std::size_t j = 1; j <= m; ++j) {
    points.push_back(hash_to_group(params, j, domain));
  }
  return MaskBasis(params, std::move(points));
}

MaskBasis MaskBasis::generator_powers(const GroupParams& params, std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "hprg: m must be >= 1");
  std::vector<GroupElement> points;
  points.reserve(m);
  BigInt acc = 1;
  for (std::size_t j = 1; j <= m; ++j) {
    acc = (acc * params.g) % params.p;
    points.push_back(GroupElement{acc});
  }
  return MaskBasis(params, std::move(points));
}

MaskVector expand(const MaskBasis& basis, const Seed& seed) {
  MaskVector out;
  out.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out.push_back(group_exp(basis.params(), basis.point(i), seed.value));
  }
  return out;
}

MaskVector expand(const GroupParams& params, const Seed& seed, std::size_t m) {
  return expand(MaskBasis::hashed(params, m), seed);
}

Bytes session_hash_domain(ByteSpan session_id) {
  ByteWriter w;
  w.prefixed(as_bytes(kDefaultHashDomain)).prefixed(session_id);
  return w.take();
}

}  // namespace hprg_agg
