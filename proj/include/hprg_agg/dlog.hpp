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

#ifndef HPRG_AGG_DLOG_HPP_
#define HPRG_AGG_DLOG_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hprg_agg/modmath.hpp"

namespace hprg_agg {

// Linear scan over g^0..g^bound. Throws NotInRange.
std::uint64_t dlog_bruteforce(const GroupParams& params,
                              const GroupElement& target, std::uint64_t bound);

// Pollard's lambda (kangaroo) method with distinguished points for logs known
// to lie in [0, bound].
//
// Let A = 2^ceil(log2 B). Each attempt derives a jump set from (rng_seed,
// ceil(log2 B), attempt) and walks a tame kangaroo from g^A for a distance of
// 2A, recording distinguished points. A wild kangaroo starts from
// target * g^(A - B), so its exponent lies in [A - B, A], and walks until it
// lands on a recorded point or passes the end of the tame trail. Solvers with
// one seed and bounds of the same bit length share the trail, which keeps
// costs comparable across bounds. The tame table of an attempt is built on
// first use and reused for every later target, so solving many logs against
// one bound costs one tame walk. Group operations are recorded in
// OpCounters::dlog_ops.
class KangarooSolver {
 public:
  static constexpr int kMaxRestarts = 8;

  KangarooSolver(GroupParams params, std::uint64_t bound, std::uint64_t rng_seed);
  ~KangarooSolver();
  KangarooSolver(KangarooSolver&&) noexcept;
  KangarooSolver& operator=(KangarooSolver&&) noexcept;

  // Throws NotInRange after 1 + kMaxRestarts failed attempts.
  std::uint64_t solve(const GroupElement& target);
  std::optional<std::uint64_t> try_solve(const GroupElement& target);

  std::uint64_t bound() const { return bound_; }
  // Jump sizes of the given attempt (for tests).
  const std::vector<std::uint64_t>& jumps(int attempt);
  unsigned distinguished_bits() const { return dp_bits_; }

 private:
  struct Attempt;
  Attempt& attempt(int k);
  std::optional<std::uint64_t> walk_wild(Attempt& a, const GroupElement& target);

  GroupParams params_;
  std::uint64_t bound_;
  std::uint64_t seed_;
  unsigned log_bound_ = 0;
  std::uint64_t anchor_ = 1;  // 2^ceil(log2 B), where the tame kangaroo starts
  unsigned dp_bits_;
  std::optional<BigInt> offset_elem_;  // g^(anchor - B)
  std::vector<std::unique_ptr<Attempt>> attempts_;
};

std::uint64_t dlog_pollard_lambda(const GroupParams& params,
                                  const GroupElement& target,
                                  std::uint64_t bound, std::uint64_t rng_seed);

// Componentwise logs sharing one solver. NotInRange carries the index of the
// first component that failed.
std::vector<std::uint64_t> dlog_vector(const GroupParams& params,
                                       std::span<const GroupElement> targets,
                                       std::uint64_t bound,
                                       std::uint64_t rng_seed = 0);

}  // namespace hprg_agg

#endif  // HPRG_AGG_DLOG_HPP_
