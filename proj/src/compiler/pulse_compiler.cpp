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

#include "pce/pulse_compiler.hpp"

#include <cstdio>

#include "pce/bytes.hpp"
#include "pce/errors.hpp"
#include "pce/rng.hpp"

namespace pce {

const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::PulseX90: return "PULSE_X90";
    case Opcode::IncPhase: return "INC_PHASE";
    case Opcode::ReqParam: return "REQ_PARAM";
    case Opcode::TwoQubit: return "TWO_QUBIT";
    case Opcode::Measure: return "MEASURE";
    case Opcode::Delay: return "DELAY";
    case Opcode::End: return "END";
  }
  return "?";
}

namespace {

bool known_opcode(std::uint8_t b) { return b >= 0x01 && b <= 0x07; }

}  // namespace

void validate(const AssemblyProgram& p) {
  if (p.ops.empty() || p.ops.back().opcode != Opcode::End) {
    throw ValidationError("assembly program must end with END");
  }
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    const AsmOp& op = p.ops[i];
    const std::string at = "op " + std::to_string(i) + " (" + opcode_name(op.opcode) + ")";
    if (op.opcode == Opcode::End) {
      if (i + 1 != p.ops.size()) throw ValidationError(at + ": END before the last op");
      continue;
    }
    if (op.channel.index >= p.n_qubits) throw ValidationError(at + ": channel out of range");
    if (op.opcode == Opcode::TwoQubit && (op.channel2.index >= p.n_qubits || op.channel2 == op.channel)) {
      throw ValidationError(at + ": bad second channel");
    }
    if (op.opcode == Opcode::ReqParam && op.imm != 0) throw ValidationError(at + ": REQ_PARAM carries an immediate");
  }
}

AssemblyProgram compile(const Circuit& c) {
  AssemblyProgram p;
  p.n_qubits = c.n_qubits;
  p.shots = c.shots;
  p.ops.reserve(c.gates.size() + 1);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    AsmOp op{.opcode = Opcode::End, .channel = g.q0, .channel2 = QubitId{0}, .imm = 0};
    switch (g.kind) {
      case GateKind::X90: op.opcode = Opcode::PulseX90; break;
      case GateKind::VirtualZ:
        op.opcode = Opcode::IncPhase;
        op.imm = quantize_phase(g.phase);
        break;
      case GateKind::ParamRequest: op.opcode = Opcode::ReqParam; break;
      case GateKind::TwoQubit:
        if (g.label.view() != "CZ") {
          throw CompileError("gate " + std::to_string(i) + ": no native pulse for two-qubit gate '" +
                             std::string(g.label.view()) + "'");
        }
        op.opcode = Opcode::TwoQubit;
        op.channel2 = g.q1;
        break;
      case GateKind::Measure: op.opcode = Opcode::Measure; break;
      case GateKind::Delay:
        op.opcode = Opcode::Delay;
        op.imm = g.duration_ns;
        break;
      default: throw CompileError("gate " + std::to_string(i) + ": unknown gate kind");
    }
    p.ops.push_back(op);
  }
  p.ops.push_back(AsmOp{});
  return p;
}

std::uint64_t encode_op(const AsmOp& op) {
  if (op.channel.index > 0xFF || op.channel2.index > 0xFF) {
    throw EncodingError(std::string(opcode_name(op.opcode)) + ": channel " +
                        std::to_string(std::max(op.channel.index, op.channel2.index)) + " does not fit 8 bits");
  }
  const std::uint64_t second = op.opcode == Opcode::TwoQubit ? op.channel2.index : 0;
  return (static_cast<std::uint64_t>(op.opcode) << 56) | (static_cast<std::uint64_t>(op.channel.index) << 48) |
         (second << 40) | op.imm;
}

MachineProgram assemble(const AssemblyProgram& p) {
  MachineProgram m;
  m.n_qubits = p.n_qubits;
  m.shots = p.shots;
  m.param_counts.assign(p.n_qubits, 0);
  m.words.reserve(p.ops.size());
  std::uint64_t acc = 0x243F6A8885A308D3ull;
  for (const AsmOp& op : p.ops) {
    const std::uint64_t w = encode_op(op);
    m.words.push_back(w);
    if (op.opcode == Opcode::ReqParam && op.channel.index < p.n_qubits) ++m.param_counts[op.channel.index];
    for (int k = 0; k < kAssembleWorkRounds; ++k) acc = splitmix64(acc ^ w);
  }
  m.checksum = static_cast<std::uint32_t>(acc ^ (acc >> 32));
  return m;
}

AssemblyProgram disassemble(const MachineProgram& m) {
  AssemblyProgram p;
  p.n_qubits = m.n_qubits;
  p.shots = m.shots;
  p.ops.reserve(m.words.size());
  for (std::size_t i = 0; i < m.words.size(); ++i) {
    const std::uint64_t w = m.words[i];
    const auto code = static_cast<std::uint8_t>(w >> 56);
    if (!known_opcode(code)) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "0x%02X", code);
      throw DecodeError(i, std::string("unknown opcode ") + buf + " in word " + std::to_string(i));
    }
    if (((w >> 32) & 0xFF) != 0) throw DecodeError(i, "reserved bits set in word " + std::to_string(i));
    AsmOp op;
    op.opcode = static_cast<Opcode>(code);
    op.channel = QubitId{static_cast<std::uint16_t>((w >> 48) & 0xFF)};
    op.channel2 = QubitId{static_cast<std::uint16_t>((w >> 40) & 0xFF)};
    if (op.opcode != Opcode::TwoQubit && op.channel2.index != 0) {
      throw DecodeError(i, "second channel set on a single-channel op in word " + std::to_string(i));
    }
    op.imm = static_cast<std::uint32_t>(w);
    p.ops.push_back(op);
  }
  validate(p);
  return p;
}

namespace {

constexpr std::uint8_t kMachineMagic[4] = {'P', 'C', 'E', 'M'};

}  // namespace

std::vector<std::uint8_t> write_machine_file(const MachineProgram& m) {
  ByteWriter payload;
  payload.buffer().reserve(8 * m.words.size());
  for (std::uint64_t w : m.words) payload.u64(w);
  ByteWriter out;
  out.buffer().reserve(kMachineHeaderSize + payload.size());
  out.bytes(kMachineMagic);
  out.u16(kMachineFileVersion);
  out.u16(m.n_qubits);
  out.u32(m.shots);
  out.u32(static_cast<std::uint32_t>(m.words.size()));
  out.u32(0);
  out.u32(crc32(payload.buffer()));
  out.bytes(payload.buffer());
  return out.take();
}

MachineProgram read_machine_file(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMachineMagic)) throw DecodeError(0, "bad magic, expected \"PCEM\"");
  const std::uint16_t version = r.u16();
  if (version != kMachineFileVersion) throw DecodeError(4, "unsupported machine file version " + std::to_string(version));
  MachineProgram m;
  m.n_qubits = r.u16();
  m.shots = r.u32();
  const std::size_t count_at = r.offset();
  const std::uint32_t count = r.u32();
  if (r.u32() != 0) throw DecodeError(16, "reserved header field is nonzero");
  const std::uint32_t crc = r.u32();
  if (static_cast<std::uint64_t>(count) * 8 != r.remaining()) {
    throw DecodeError(count_at, "word count " + std::to_string(count) + " does not match " +
                                    std::to_string(r.remaining()) + " payload bytes");
  }
  if (crc32(bytes.subspan(kMachineHeaderSize)) != crc) throw DecodeError(20, "payload CRC-32 mismatch");
  m.words.resize(count);
  for (auto& w : m.words) w = r.u64();
  return assemble(disassemble(m));
}

std::string format_assembly(const AssemblyProgram& p) {
  std::string out;
  char buf[96];
  for (const AsmOp& op : p.ops) {
    if (op.opcode == Opcode::TwoQubit) {
      std::snprintf(buf, sizeof(buf), "%-10s ch%u,ch%u\n", opcode_name(op.opcode), op.channel.index, op.channel2.index);
    } else if (op.opcode == Opcode::End) {
      std::snprintf(buf, sizeof(buf), "END\n");
    } else {
      std::snprintf(buf, sizeof(buf), "%-10s ch%u 0x%08X\n", opcode_name(op.opcode), op.channel.index, op.imm);
    }
    out += buf;
  }
  return out;
}

}  // namespace pce
