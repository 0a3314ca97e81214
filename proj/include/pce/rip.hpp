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
#include <span>
#include <vector>

#include "pce/circuit.hpp"

namespace pce {

/// Words one qubit's parameter bank can hold for a single circuit.
inline constexpr std::size_t kMaxPhaseWordsPerQubit = 2048;

/// One gate as seen from one qubit's chain. VirtualZ nodes only mark a
/// parameter slot; their phase never enters node identity.
struct GraphNode {
  GateKind kind = GateKind::X90;
  std::int32_t partner = -1;  // other qubit of a TwoQubit gate
  std::uint8_t operand = 0;    // 0 for the first operand, 1 for the second
  std::uint32_t position = 0;  // index of the gate in the circuit
  std::uint32_t duration_ns = 0;
  GateLabel label;

  bool param_slot() const { return kind == GateKind::VirtualZ; }
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct StructuralGraph {
  std::vector<QubitId> roots;                 // one per register qubit
  std::vector<std::vector<GraphNode>> chains;  // chains[i] belongs to roots[i]

  std::size_t node_count() const;
  /// Hash of the whole structure; equal graphs have equal fingerprints.
  std::uint64_t fingerprint() const;
};

StructuralGraph build_graph(const Circuit& c);
bool structural_equal(const StructuralGraph& a, const StructuralGraph& b);

/// Groups of circuit indices; groups[g][0] is the representative.
class EquivalenceReport {
 public:
  EquivalenceReport() = default;
  explicit EquivalenceReport(std::vector<std::vector<std::uint32_t>> groups);

  const std::vector<std::vector<std::uint32_t>>& groups() const { return groups_; }
  /// Flattened groups: the execution order.
  const std::vector<std::uint32_t>& order() const { return order_; }
  std::size_t circuit_count() const { return order_.size(); }
  std::size_t group_count() const { return groups_.size(); }
  std::vector<std::uint32_t> representatives() const;
  /// unique_flags()[i] is set iff circuit i represents its group.
  std::vector<bool> unique_flags() const;
  /// group_of()[i] is the group index of circuit i.
  std::vector<std::uint32_t> group_of() const;
  /// Fraction of circuits that are not representatives, in percent.
  double structural_equivalency_percent() const;

  friend bool operator==(const EquivalenceReport& a, const EquivalenceReport& b) { return a.groups_ == b.groups_; }

 private:
  std::vector<std::vector<std::uint32_t>> groups_;
  std::vector<std::uint32_t> order_;
};

/// Greedy grouping in batch order: each circuit joins the earliest group whose
/// representative is structurally equal, otherwise founds a new group.
/// Structures are bucketed by fingerprint and compared exactly inside a bucket.
EquivalenceReport identify(std::span<const Circuit> circuits);
EquivalenceReport identify_graphs(std::span<const StructuralGraph> graphs);

/// Per-qubit phase words: words[q] lists the quantised VirtualZ phases on q in
/// circuit order.
using QubitWords = std::vector<std::vector<std::uint32_t>>;

/// Throws CapacityError if any qubit carries more than 2048 phases.
QubitWords peel(const Circuit& c);

/// Every VirtualZ becomes a ParamRequest on the same qubit and position.
Circuit modify(const Circuit& c);

/// Inverse of peel+modify: each ParamRequest takes the next word of its qubit
/// and becomes VirtualZ(dequantised word). Throws ValidationError when the word
/// lists do not match the request counts.
Circuit restitch(const Circuit& modified, const QubitWords& words);

struct ParamTable {
  std::uint16_t n_qubits = 0;
  std::vector<QubitWords> circuits;  // [circuit][qubit] -> words, every entry sized n_qubits

  friend bool operator==(const ParamTable&, const ParamTable&) = default;
};

struct RipResult {
  std::vector<Circuit> uniques;  // modified representatives, in group order
  EquivalenceReport report;
  ParamTable table;
};

RipResult rip(std::span<const Circuit> circuits);

}  // namespace pce
