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
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pce/phase.hpp"

namespace pce {

/// Physical qubit label, 0-based.
struct QubitId {
  std::uint16_t index = 0;

  auto operator<=>(const QubitId&) const = default;
};

enum class GateKind : std::uint8_t {
  X90,
  VirtualZ,
  TwoQubit,
  Measure,
  Delay,
  ParamRequest,
};

const char* gate_kind_name(GateKind kind);

/// Short fixed-capacity name of a two-qubit gate ("CZ").
class GateLabel {
 public:
  static constexpr std::size_t kCapacity = 7;

  GateLabel() = default;
  explicit GateLabel(std::string_view name);

  std::string_view view() const { return {chars_.data(), size_}; }
  bool empty() const { return size_ == 0; }

  friend bool operator==(const GateLabel&, const GateLabel&) = default;

 private:
  std::array<char, kCapacity> chars_{};
  std::uint8_t size_ = 0;
};

struct Gate {
  GateKind kind = GateKind::X90;
  QubitId q0;
  QubitId q1;                 // TwoQubit only
  Phase phase;                // VirtualZ only
  std::uint32_t duration_ns = 0;  // Delay only
  GateLabel label;            // TwoQubit only

  static Gate x90(QubitId q);
  static Gate vz(QubitId q, Phase p);
  static Gate cz(QubitId a, QubitId b);
  static Gate two_qubit(std::string_view name, QubitId a, QubitId b);
  static Gate measure(QubitId q);
  static Gate delay(QubitId q, std::uint32_t ns);
  static Gate param_request(QubitId q);

  int arity() const { return kind == GateKind::TwoQubit ? 2 : 1; }
  bool touches(QubitId q) const { return q0 == q || (kind == GateKind::TwoQubit && q1 == q); }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  std::vector<Gate> gates;
  std::uint16_t n_qubits = 1;
  std::uint32_t shots = 100;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Checks the Circuit invariants: qubit bounds, distinct two-qubit operands,
/// phases only on VirtualZ, and Measure being terminal on its qubit.
/// Throws ValidationError.
void validate(const Circuit& c);

/// Returns a copy of `c` without Measure gates.
Circuit strip_measurements(const Circuit& c);

// Text format, one gate per line:
//   qubits <n> shots <s>
//   X90 q<i> | VZ q<i> <radians> | CZ q<i> q<j> | MEAS q<i> | DELAY q<i> <ns> | PREQ q<i>
// '#' starts a comment. Phases are written with 17 significant digits so a
// write/parse cycle is exact.
std::string to_text(const Circuit& c);
Circuit parse_circuit(std::string_view text);

}  // namespace pce
