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

#include "pce/oracles.hpp"

#include <algorithm>
#include <numeric>

#include "pce/phase.hpp"

namespace pce::oracle {

bool phase_blind_equal(const Circuit& a, const Circuit& b) {
  if (a.n_qubits != b.n_qubits || a.gates.size() != b.gates.size()) return false;
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    Gate x = a.gates[i];
    Gate y = b.gates[i];
    x.phase = Phase{};
    y.phase = Phase{};
    if (!(x == y)) return false;
  }
  return true;
}

std::vector<std::vector<std::uint32_t>> brute_force_partition(std::span<const Circuit> circuits) {
  const std::size_t n = circuits.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (phase_blind_equal(circuits[i], circuits[j])) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<std::uint32_t>> groups;
  std::vector<std::int64_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(static_cast<std::uint32_t>(i));
  }
  return groups;
}

std::optional<TraceMismatch> first_trace_mismatch(const PulseTrace& a, const PulseTrace& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) continue;
    const std::string fa = format_trace({a[i]});
    const std::string fb = format_trace({b[i]});
    return TraceMismatch{i, "event " + std::to_string(i) + ": " + fa.substr(0, fa.size() - 1) + " vs " +
                                fb.substr(0, fb.size() - 1)};
  }
  if (a.size() != b.size()) {
    return TraceMismatch{n, "trace lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size())};
  }
  return std::nullopt;
}

std::vector<std::vector<std::uint32_t>> phase_words(const Circuit& c) {
  std::vector<std::vector<std::uint32_t>> words(c.n_qubits);
  for (const Gate& g : c.gates)
    if (g.kind == GateKind::VirtualZ) words.at(g.q0.index).push_back(quantize_phase(g.phase));
  return words;
}

}  // namespace pce::oracle
