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

#include "hprg_agg/counters.hpp"

namespace hprg_agg {
namespace {

thread_local OpCounters* tls_sink = nullptr;

}  // namespace

OpCounters& OpCounters::operator+=(const OpCounters& o) {
  group_exp += o.group_exp;
  group_mul += o.group_mul;
  field_mul += o.field_mul;
  lagrange_mul += o.lagrange_mul;
  reconstructions += o.reconstructions;
  dlog_ops += o.dlog_ops;
  sign += o.sign;
  verify += o.verify;
  encrypt += o.encrypt;
  decrypt += o.decrypt;
  return *this;
}

OpCounters operator-(OpCounters a, const OpCounters& b) {
  a.group_exp -= b.group_exp;
  a.group_mul -= b.group_mul;
  a.field_mul -= b.field_mul;
  a.lagrange_mul -= b.lagrange_mul;
  a.reconstructions -= b.reconstructions;
  a.dlog_ops -= b.dlog_ops;
  a.sign -= b.sign;
  a.verify -= b.verify;
  a.encrypt -= b.encrypt;
  a.decrypt -= b.decrypt;
  return a;
}

CounterScope::CounterScope(OpCounters* sink) : previous_(tls_sink) {
  tls_sink = sink;
}

CounterScope::~CounterScope() { tls_sink = previous_; }

OpCounters* CounterScope::current() noexcept { return tls_sink; }

}  // namespace hprg_agg
