// Copyright 2026 The PCE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pce/circuit.hpp"
#include "pce/control.hpp"

namespace pce::oracle {

/// Gate-by-gate comparison with VirtualZ angles ignored.
bool phase_blind_equal(const Circuit& a, const Circuit& b);

/// All-pairs partition of a batch under phase_blind_equal, merged with
/// union-find. Groups are listed by smallest member, members ascending.
std::vector<std::vector<std::uint32_t>> brute_force_partition(std::span<const Circuit> circuits);

struct TraceMismatch {
  std::size_t event = 0;
  std::string detail;
};

/// First differing event of two traces, or nullopt when they are identical.
std::optional<TraceMismatch> first_trace_mismatch(const PulseTrace& a, const PulseTrace& b);

/// Phase words of a circuit read straight off its gate list, per qubit.
std::vector<std::vector<std::uint32_t>> phase_words(const Circuit& c);

}  // namespace pce::oracle
