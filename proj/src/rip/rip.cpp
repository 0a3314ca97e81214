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

#include "pce/rip.hpp"

#include <algorithm>
#include <unordered_map>

#include "pce/errors.hpp"

namespace pce {

std::size_t StructuralGraph::node_count() const {
  std::size_t n = 0;
  for (const auto& chain : chains) n += chain.size();
  return n;
}

std::uint64_t StructuralGraph::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  const auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ull;
    }
  };
  mix(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    mix(roots[i].index);
    mix(chains[i].size());
    for (const GraphNode& n : chains[i]) {
      mix(static_cast<std::uint64_t>(n.kind) | (static_cast<std::uint64_t>(n.operand) << 8) |
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.partner)) << 16));
      mix(n.position | (static_cast<std::uint64_t>(n.duration_ns) << 32));
      for (char ch : n.label.view()) mix(static_cast<unsigned char>(ch));
    }
  }
  return h;
}

StructuralGraph build_graph(const Circuit& c) {
  StructuralGraph g;
  g.roots.reserve(c.n_qubits);
  for (std::uint16_t q = 0; q < c.n_qubits; ++q) g.roots.push_back(QubitId{q});
  g.chains.resize(c.n_qubits);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& gate = c.gates[i];
    GraphNode node{.kind = gate.kind,
                   .partner = -1,
                   .operand = 0,
                   .position = static_cast<std::uint32_t>(i),
                   .duration_ns = gate.kind == GateKind::Delay ? gate.duration_ns : 0,
                   .label = gate.label};
    if (gate.q0.index >= c.n_qubits || (gate.kind == GateKind::TwoQubit && gate.q1.index >= c.n_qubits)) {
      throw ValidationError("build_graph: gate " + std::to_string(i) + " addresses a qubit outside the register");
    }
    if (gate.kind == GateKind::TwoQubit) {
      node.partner = gate.q1.index;
      g.chains[gate.q0.index].push_back(node);
      node.partner = gate.q0.index;
      node.operand = 1;
      g.chains[gate.q1.index].push_back(node);
    } else {
      g.chains[gate.q0.index].push_back(node);
    }
  }
  return g;
}

bool structural_equal(const StructuralGraph& a, const StructuralGraph& b) {
  return a.roots == b.roots && a.chains == b.chains;
}

// ---------------------------------------------------------------------------

EquivalenceReport::EquivalenceReport(std::vector<std::vector<std::uint32_t>> groups) : groups_(std::move(groups)) {
  std::size_t n = 0;
  for (const auto& g : groups_) {
    if (g.empty()) throw ValidationError("equivalence report: empty group");
    n += g.size();
  }
  order_.reserve(n);
  for (const auto& g : groups_) order_.insert(order_.end(), g.begin(), g.end());
  std::vector<bool> seen(n, false);
  for (std::uint32_t i : order_) {
    if (i >= n || seen[i]) throw ValidationError("equivalence report: groups do not partition 0..n-1");
    seen[i] = true;
  }
}

std::vector<std::uint32_t> EquivalenceReport::representatives() const {
  std::vector<std::uint32_t> reps;
  reps.reserve(groups_.size());
  for (const auto& g : groups_) reps.push_back(g.front());
  return reps;
}

std::vector<bool> EquivalenceReport::unique_flags() const {
  std::vector<bool> flags(order_.size(), false);
  for (const auto& g : groups_) flags[g.front()] = true;
  return flags;
}

std::vector<std::uint32_t> EquivalenceReport::group_of() const {
  std::vector<std::uint32_t> out(order_.size(), 0);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi)
    for (std::uint32_t i : groups_[gi]) out[i] = static_cast<std::uint32_t>(gi);
  return out;
}

double EquivalenceReport::structural_equivalency_percent() const {
  if (order_.empty()) return 0.0;
  const double n = static_cast<double>(order_.size());
  return 100.0 * (n - static_cast<double>(groups_.size())) / n;
}

namespace {

class Grouper {
 public:
  // Returns the group index the graph joined.
  std::size_t add(std::uint32_t index, StructuralGraph graph) {
    auto& bucket = buckets_[graph.fingerprint()];
    for (std::size_t gi : bucket) {
      if (structural_equal(rep_graphs_[gi], graph)) {
        groups_[gi].push_back(index);
        return gi;
      }
    }
    bucket.push_back(groups_.size());
    groups_.push_back({index});
    rep_graphs_.push_back(std::move(graph));
    return groups_.size() - 1;
  }

  EquivalenceReport finish() { return EquivalenceReport(std::move(groups_)); }

 private:
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
  std::vector<std::vector<std::uint32_t>> groups_;
  std::vector<StructuralGraph> rep_graphs_;
};

}  // namespace

EquivalenceReport identify(std::span<const Circuit> circuits) {
  Grouper grouper;
  for (std::size_t i = 0; i < circuits.size(); ++i) grouper.add(static_cast<std::uint32_t>(i), build_graph(circuits[i]));
  return grouper.finish();
}

EquivalenceReport identify_graphs(std::span<const StructuralGraph> graphs) {
  Grouper grouper;
  for (std::size_t i = 0; i < graphs.size(); ++i) grouper.add(static_cast<std::uint32_t>(i), graphs[i]);
  return grouper.finish();
}

// ---------------------------------------------------------------------------

QubitWords peel(const Circuit& c) {
  QubitWords words(c.n_qubits);
  for (const Gate& g : c.gates) {
    if (g.kind != GateKind::VirtualZ) continue;
    if (g.q0.index >= words.size()) words.resize(g.q0.index + 1);
    words[g.q0.index].push_back(quantize_phase(g.phase));
  }
  for (std::size_t q = 0; q < words.size(); ++q) {
    if (words[q].size() > kMaxPhaseWordsPerQubit) {
      throw CapacityError(static_cast<std::uint32_t>(q), words[q].size(), "peel");
    }
  }
  return words;
}

Circuit modify(const Circuit& c) {
  Circuit out = c;
  for (Gate& g : out.gates) {
    if (g.kind == GateKind::VirtualZ) g = Gate::param_request(g.q0);
  }
  return out;
}

Circuit restitch(const Circuit& modified, const QubitWords& words) {
  Circuit out = modified;
  std::vector<std::size_t> cursor(words.size(), 0);
  for (Gate& g : out.gates) {
    if (g.kind != GateKind::ParamRequest) continue;
    const std::size_t q = g.q0.index;
    if (q >= words.size() || cursor[q] >= words[q].size()) {
      throw ValidationError("restitch: not enough phase words for q" + std::to_string(q));
    }
    g = Gate::vz(g.q0, dequantize_phase(words[q][cursor[q]++]));
  }
  for (std::size_t q = 0; q < words.size(); ++q) {
    if (cursor[q] != words[q].size()) {
      throw ValidationError("restitch: " + std::to_string(words[q].size() - cursor[q]) + " unused phase words for q" +
                            std::to_string(q));
    }
  }
  return out;
}

RipResult rip(std::span<const Circuit> circuits) {
  RipResult out;
  std::uint16_t n_qubits = 0;
  for (const Circuit& c : circuits) n_qubits = std::max(n_qubits, c.n_qubits);
  out.table.n_qubits = n_qubits;
  out.table.circuits.reserve(circuits.size());
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    try {
      QubitWords w = peel(circuits[i]);
      w.resize(n_qubits);
      out.table.circuits.push_back(std::move(w));
    } catch (const CapacityError& e) {
      throw CapacityError(e.qubit(), e.count(), "peel of circuit " + std::to_string(i));
    }
  }
  out.report = identify(circuits);
  out.uniques.reserve(out.report.group_count());
  for (std::uint32_t rep : out.report.representatives()) out.uniques.push_back(modify(circuits[rep]));
  return out;
}

}  // namespace pce
