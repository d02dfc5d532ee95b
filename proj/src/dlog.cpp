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

#include "hprg_agg/dlog.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/errors.hpp"
#include "hprg_agg/rng.hpp"

namespace hprg_agg {
namespace {

// Below this bound a linear scan is cheaper than setting up kangaroos.
constexpr std::uint64_t kScanBound = 16;

std::uint64_t low_word(const BigInt& v) {
  return static_cast<std::uint64_t>(mpz_getlimbn(v.get_mpz_t(), 0));
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t isqrt_ceil(std::uint64_t b) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(b)));
  while (r * r > b) --r;
  while (r * r < b) ++r;
  return r;
}

// ceil(log2(x)) for x >= 1.
unsigned ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<unsigned>(std::bit_width(x - 1));
}

void mul_into(const GroupParams& params, BigInt& acc, const BigInt& by) {
  counters::bump<&OpCounters::dlog_ops>();
  mpz_mul(acc.get_mpz_t(), acc.get_mpz_t(), by.get_mpz_t());
  mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), params.p.get_mpz_t());
}

BigInt pow_g(const GroupParams& params, std::uint64_t e) {
  counters::bump<&OpCounters::dlog_ops>();
  BigInt out;
  mpz_powm_ui(out.get_mpz_t(), params.g.get_mpz_t(), e, params.p.get_mpz_t());
  return out;
}

std::optional<std::uint64_t> scan(const GroupParams& params,
                                  const GroupElement& target,
                                  std::uint64_t bound) {
  BigInt acc = 1;
  for (std::uint64_t z = 0;; ++z) {
    if (acc == target.value) return z;
    if (z == bound) return std::nullopt;
    mul_into(params, acc, params.g);
  }
}

}  // namespace

std::uint64_t dlog_bruteforce(const GroupParams& params,
                              const GroupElement& target, std::uint64_t bound) {
  if (auto z = scan(params, target, bound)) return *z;
  throw NotInRange("dlog: no exponent in [0, " + std::to_string(bound) + "]");
}

struct KangarooSolver::Attempt {
  std::vector<std::uint64_t> jumps;
  std::vector<BigInt> jump_elems;
  std::uint64_t salt = 0;
  std::uint64_t tame_distance = 0;
  // low word -> (element, tame distance from the anchor)
  std::unordered_map<std::uint64_t, std::vector<std::pair<BigInt, std::uint64_t>>>
      tame;

  std::size_t pick(const BigInt& e) const {
    return static_cast<std::size_t>(mix64(low_word(e) ^ salt) % jumps.size());
  }
};

KangarooSolver::KangarooSolver(GroupParams params, std::uint64_t bound,
                               std::uint64_t rng_seed)
    : params_(std::move(params)), bound_(bound), seed_(rng_seed) {
  // Everything but the wild start depends on ceil(log2 B) alone, so solvers
  // for nearby bounds with one seed walk the same trail.
  log_bound_ = ceil_log2(bound_ == 0 ? 1 : bound_);
  anchor_ = std::uint64_t{1} << log_bound_;
  const unsigned sqrt_bits = ceil_log2(isqrt_ceil(bound_ == 0 ? 1 : bound_));
  dp_bits_ = sqrt_bits > 2 ? sqrt_bits - 2 : 0;
}

KangarooSolver::~KangarooSolver() = default;
KangarooSolver::KangarooSolver(KangarooSolver&&) noexcept = default;
KangarooSolver& KangarooSolver::operator=(KangarooSolver&&) noexcept = default;

KangarooSolver::Attempt& KangarooSolver::attempt(int k) {
  while (static_cast<int>(attempts_.size()) <= k) {
    const int index = static_cast<int>(attempts_.size());
    auto a = std::make_unique<Attempt>();
    Rng rng = Rng::from_u64(seed_).derive("kangaroo/" + std::to_string(log_bound_) + "/" +
                                          std::to_string(index));

    const std::size_t count = (log_bound_ + 1) / 2 + 2;
    const std::uint64_t max_jump = std::uint64_t{1} << ((log_bound_ + 1) / 2);
    std::uint64_t g = 0;
    do {
      a->jumps.clear();
      g = 0;
      for (std::size_t i = 0; i < count; ++i) {
        a->jumps.push_back(1 + rng.uniform_u64(max_jump));
        g = std::gcd(g, a->jumps.back());
      }
    } while (g != 1);
    a->salt = rng();
    for (std::uint64_t s : a->jumps) a->jump_elems.push_back(pow_g(params_, s));

    const std::uint64_t dp_mask = (std::uint64_t{1} << dp_bits_) - 1;
    a->tame_distance = 2 * anchor_;
    BigInt pos = pow_g(params_, anchor_);
    std::uint64_t dist = 0;
    for (;;) {
      if ((low_word(pos) & dp_mask) == 0) {
        a->tame[low_word(pos)].emplace_back(pos, dist);
        if (dist >= a->tame_distance) break;
      }
      const std::size_t j = a->pick(pos);
      mul_into(params_, pos, a->jump_elems[j]);
      dist += a->jumps[j];
    }
    a->tame_distance = dist;
    attempts_.push_back(std::move(a));
  }
  return *attempts_[static_cast<std::size_t>(k)];
}

const std::vector<std::uint64_t>& KangarooSolver::jumps(int k) {
  return attempt(k).jumps;
}

std::optional<std::uint64_t> KangarooSolver::walk_wild(Attempt& a,
                                                       const GroupElement& target) {
  const std::uint64_t dp_mask = (std::uint64_t{1} << dp_bits_) - 1;
  // The wild kangaroo starts at z + offset in [offset, anchor], just below
  // the tame start, and has overtaken the whole trail past this distance.
  const std::uint64_t offset = anchor_ - bound_;
  const std::uint64_t limit = anchor_ + a.tame_distance;
  BigInt pos = target.value;
  if (offset != 0) {
    if (!offset_elem_) offset_elem_ = pow_g(params_, offset);
    mul_into(params_, pos, *offset_elem_);
  }
  std::uint64_t dist = 0;
  while (dist <= limit) {
    const std::uint64_t key = low_word(pos);
    if ((key & dp_mask) == 0) {
      if (auto it = a.tame.find(key); it != a.tame.end()) {
        for (const auto& [elem, tame_dist] : it->second) {
          const std::uint64_t meet = anchor_ + tame_dist;
          if (elem != pos || meet < dist + offset) continue;
          const std::uint64_t z = meet - dist - offset;
          if (z <= bound_ && pow_g(params_, z) == target.value) return z;
        }
      }
    }
    const std::size_t j = a.pick(pos);
    mul_into(params_, pos, a.jump_elems[j]);
    dist += a.jumps[j];
  }
  return std::nullopt;
}

std::optional<std::uint64_t> KangarooSolver::try_solve(const GroupElement& target) {
  if (bound_ < kScanBound) return scan(params_, target, bound_);
  for (int k = 0; k <= kMaxRestarts; ++k) {
    if (auto z = walk_wild(attempt(k), target)) return z;
  }
  return std::nullopt;
}

std::uint64_t KangarooSolver::solve(const GroupElement& target) {
  if (auto z = try_solve(target)) return *z;
  throw NotInRange("dlog: kangaroo found no exponent in [0, " +
                   std::to_string(bound_) + "]");
}

std::uint64_t dlog_pollard_lambda(const GroupParams& params,
                                  const GroupElement& target,
                                  std::uint64_t bound, std::uint64_t rng_seed) {
  return KangarooSolver(params, bound, rng_seed).solve(target);
}

std::vector<std::uint64_t> dlog_vector(const GroupParams& params,
                                       std::span<const GroupElement> targets,
                                       std::uint64_t bound,
                                       std::uint64_t rng_seed) {
  std::vector<std::uint64_t> out;
  out.reserve(targets.size());
  if (targets.empty()) return out;
  KangarooSolver solver(params, bound, rng_seed);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto z = solver.try_solve(targets[i]);
    if (!z) {
      throw NotInRange("dlog: component " + std::to_string(i) +
                           " has no exponent in [0, " + std::to_string(bound) + "]",
                       i);
    }
    out.push_back(*z);
  }
  return out;
}

}  // namespace hprg_agg
