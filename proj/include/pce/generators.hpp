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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pce/circuit.hpp"
#include "pce/unitary.hpp"

namespace pce {

/// The 24 single-qubit Cliffords modulo global phase. Entry 0 is the
/// identity; the rest are enumerated breadth-first from {H, S}.
class CliffordTable {
 public:
  static constexpr std::size_t kSize = 24;

  const U3Params& params(std::size_t i) const { return params_.at(i); }
  const UnitaryMatrix& matrix(std::size_t i) const { return matrices_.at(i); }
  std::size_t size() const { return kSize; }

  /// Index k with matrix(k) ∝ matrix(later) · matrix(first).
  std::size_t compose(std::size_t first, std::size_t later) const;
  /// Index k with matrix(k) ∝ u; throws DomainError if u is not a Clifford.
  std::size_t find(const UnitaryMatrix& u) const;

 private:
  friend const CliffordTable& clifford_table();
  CliffordTable();

  std::array<U3Params, kSize> params_{};
  std::array<UnitaryMatrix, kSize> matrices_{};
};

const CliffordTable& clifford_table();

enum class BatchKind { RB, RC, FRC, CB };

const char* batch_kind_name(BatchKind kind);
BatchKind parse_batch_kind(const std::string& name);

using Width = std::vector<QubitId>;

struct BatchSpec {
  BatchKind kind = BatchKind::RB;
  std::vector<Width> widths;
  /// Either one depth list shared by every width or one list per width.
  std::vector<std::vector<std::uint32_t>> depths;
  std::uint32_t randomizations = 1;
  /// CB only: circuits per (width, depth), one entry per width. Empty means
  /// `randomizations` for every width.
  std::vector<std::uint32_t> circuits_per_depth;
  std::uint32_t shots = 100;
  std::uint64_t seed = 0;

  const std::vector<std::uint32_t>& depths_for(std::size_t width_index) const;
  std::uint32_t circuits_for(std::size_t width_index) const;

  friend bool operator==(const BatchSpec&, const BatchSpec&) = default;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const BatchSpec& spec);

struct CircuitLabel {
  std::uint32_t width_index = 0;
  std::uint32_t depth = 0;
  std::uint32_t randomization = 0;
  std::string role;  // "rb", "read0", "read1", "rc", "cb", or "external"

  friend bool operator==(const CircuitLabel&, const CircuitLabel&) = default;
};

struct CircuitBatch {
  std::vector<Circuit> circuits;
  BatchSpec spec;
  std::vector<CircuitLabel> labels;
};

/// Simultaneous single-qubit RB. Each width contributes depths × randomizations
/// circuits followed by its two readout circuits.
CircuitBatch gen_rb(const BatchSpec& spec);

/// Cycle benchmarking with CZ on fixed chain pairs (w0,w1), (w2,w3), ...
CircuitBatch gen_cb(const BatchSpec& spec);

struct RcOptions {
  /// Use the identity for every twirl; the output is then the base with each
  /// single-qubit layer lowered to one U3 per qubit.
  bool force_identity = false;
};

/// Randomized compiling of a layered base circuit: single-qubit layers and
/// two-qubit (CZ) layers alternating, optionally followed by Measures.
CircuitBatch gen_rc(const Circuit& base, std::uint32_t n_rand, std::uint64_t seed, RcOptions opts = {});

/// A random layered circuit of `depth` CZ cycles on `width`: depth + 1 layers
/// of random U3 gates separated by chain-paired CZ layers, then Measure.
Circuit random_layered_circuit(const Width& width, std::uint32_t depth, std::uint64_t seed, std::uint32_t shots);

/// RC / FRC batches: one random base per (width, depth), randomized
/// `spec.randomizations` times.
CircuitBatch gen_rc_batch(const BatchSpec& spec);

/// Readout calibration pair: |0…0⟩ and |1…1⟩ preparation, both lowered via
/// u3_decompose so that they share one structure.
std::array<Circuit, 2> gen_read_circuits(const Width& width, std::uint32_t shots);

/// Dispatches on spec.kind.
CircuitBatch generate(const BatchSpec& spec);

// Experiment parameter sets of the reference RC20 / FRC / CB / RB runs.
BatchSpec preset_rc20(std::uint64_t seed = 2024);
BatchSpec preset_frc(std::uint64_t seed = 2024);
BatchSpec preset_cb(std::uint64_t seed = 2024);
BatchSpec preset_rb(std::uint64_t seed = 2024);

/// Register size for a width: highest qubit + 1.
std::uint16_t register_size(const Width& width);

}  // namespace pce
