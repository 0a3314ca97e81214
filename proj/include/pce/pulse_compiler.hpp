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
#include <string>
#include <vector>

#include "pce/circuit.hpp"

namespace pce {

// Opcode numbering is part of the machine-file format; never renumber.
enum class Opcode : std::uint8_t {
  PulseX90 = 0x01,
  IncPhase = 0x02,
  ReqParam = 0x03,
  TwoQubit = 0x04,
  Measure = 0x05,
  Delay = 0x06,
  End = 0x07,
};

const char* opcode_name(Opcode op);

struct AsmOp {
  Opcode opcode = Opcode::End;
  QubitId channel;
  QubitId channel2;  // TwoQubit only
  std::uint32_t imm = 0;  // phase word for IncPhase, ns for Delay

  friend bool operator==(const AsmOp&, const AsmOp&) = default;
};

struct AssemblyProgram {
  std::vector<AsmOp> ops;
  std::uint16_t n_qubits = 1;
  std::uint32_t shots = 100;

  friend bool operator==(const AssemblyProgram&, const AssemblyProgram&) = default;
};

/// Channel bounds, ReqParam imm = 0, and exactly one End as the last op.
/// Throws ValidationError.
void validate(const AssemblyProgram& p);

struct MachineProgram {
  std::vector<std::uint64_t> words;
  std::uint16_t n_qubits = 1;
  std::uint32_t shots = 100;
  std::vector<std::uint32_t> param_counts;  // ReqParam ops per qubit
  std::uint32_t checksum = 0;               // accumulated during assembly

  friend bool operator==(const MachineProgram&, const MachineProgram&) = default;
};

/// VirtualZ -> IncPhase(quantised phase), X90 -> PulseX90,
/// ParamRequest -> ReqParam, CZ -> TwoQubit, Measure, Delay; then End.
/// Throws CompileError for gates the control stack has no opcode for.
AssemblyProgram compile(const Circuit& c);

/// Rounds of checksum mixing per emitted word. A fixed amount of work per
/// word makes assembly cost proportional to program size.
inline constexpr int kAssembleWorkRounds = 64;

/// One 64-bit word per op:
///   bits 63-56 opcode | 55-48 channel | 47-40 second channel (TwoQubit) |
///   39-32 reserved (0) | 31-0 imm
/// Throws EncodingError for channels >= 256.
MachineProgram assemble(const AssemblyProgram& p);

std::uint64_t encode_op(const AsmOp& op);

/// Exact inverse of assemble. Throws DecodeError (offset = word index) on an
/// unknown opcode or nonzero reserved bits, ValidationError if the result is
/// not a valid program.
AssemblyProgram disassemble(const MachineProgram& m);

// Machine file: 24-byte little-endian header
//   "PCEM" | version u16 | n_qubits u16 | shots u32 | word count u32 |
//   reserved u32 (0) | CRC-32 of the word payload u32
// followed by the words as u64.
inline constexpr std::uint16_t kMachineFileVersion = 1;
inline constexpr std::size_t kMachineHeaderSize = 24;

std::vector<std::uint8_t> write_machine_file(const MachineProgram& m);
MachineProgram read_machine_file(std::span<const std::uint8_t> bytes);

std::string format_assembly(const AssemblyProgram& p);

}  // namespace pce
