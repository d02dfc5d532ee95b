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

#ifndef HPRG_AGG_COUNTERS_HPP_
#define HPRG_AGG_COUNTERS_HPP_

#include <cstdint>

namespace hprg_agg {

// Per-party operation counts. Arithmetic functions record into whichever
// OpCounters is installed on the calling thread by a CounterScope; with no
// scope installed, counting is a no-op.
struct OpCounters {
  std::uint64_t group_exp = 0;
  std::uint64_t group_mul = 0;
  std::uint64_t field_mul = 0;
  // Multiplications spent building Lagrange bases (one-off precomputation).
  std::uint64_t lagrange_mul = 0;
  std::uint64_t reconstructions = 0;
  std::uint64_t dlog_ops = 0;
  std::uint64_t sign = 0;
  std::uint64_t verify = 0;
  std::uint64_t encrypt = 0;
  std::uint64_t decrypt = 0;

  OpCounters& operator+=(const OpCounters& o);
  friend OpCounters operator-(OpCounters a, const OpCounters& b);
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

class CounterScope {
 public:
  explicit CounterScope(OpCounters* sink);
  ~CounterScope();
  CounterScope(const CounterScope&) = delete;
  CounterScope& operator=(const CounterScope&) = delete;

  static OpCounters* current() noexcept;

 private:
  OpCounters* previous_;
};

namespace counters {

// Adds `n` to the selected field of the current sink, if any.
template <std::uint64_t OpCounters::*Field>
inline void bump(std::uint64_t n = 1) noexcept {
  if (OpCounters* c = CounterScope::current()) c->*Field += n;
}

}  // namespace counters
}  // namespace hprg_agg

#endif  // HPRG_AGG_COUNTERS_HPP_
