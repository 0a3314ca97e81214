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

#include "pce/control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "pce/errors.hpp"
#include "pce/phase.hpp"
#include "pce/rng.hpp"

namespace pce {

MemoryAddress addr_map(std::uint32_t axi) {
  if ((axi >> 14) != 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "AXI address 0x%08X sets bits above bit 13", axi);
    throw AddressError(buf);
  }
  return MemoryAddress{static_cast<std::uint8_t>(axi >> 11), static_cast<std::uint16_t>(axi & 0x7FF)};
}

ParameterMemory::ParameterMemory() : banks_(kParamBanks) { clear(); }

void ParameterMemory::clear() {
  for (auto& b : banks_) b.fill(0);
}

void ParameterMemory::write_params(std::size_t bank, std::span<const std::uint32_t> words, std::size_t offset) {
  if (bank >= kParamBanks) throw AddressError("parameter bank " + std::to_string(bank) + " does not exist");
  if (offset + words.size() > kBankWords) {
    throw CapacityError(static_cast<std::uint32_t>(bank), offset + words.size(), "write_params");
  }
  std::copy(words.begin(), words.end(), banks_[bank].begin() + static_cast<std::ptrdiff_t>(offset));
}

std::uint32_t ParameterMemory::read_param(std::size_t bank, std::size_t offset) const {
  if (bank >= kParamBanks || offset >= kBankWords) {
    throw AddressError("read outside parameter memory: bank " + std::to_string(bank) + " offset " +
                       std::to_string(offset));
  }
  return banks_[bank][offset];
}

void ParameterMemory::axi_write(std::uint32_t axi, std::uint32_t word) {
  const MemoryAddress a = addr_map(axi);
  banks_[a.bank][a.offset] = word;
}

std::uint32_t ParameterMemory::debug_read(std::uint32_t axi) const {
  if (!debug_) throw UnsupportedOperation("controller read-back requires debug mode");
  const MemoryAddress a = addr_map(axi);
  return banks_[a.bank][a.offset];
}

void ParameterMemory::debug_write(std::size_t bank, std::size_t offset, std::uint32_t word) {
  if (!debug_) throw UnsupportedOperation("stitch-side write requires debug mode");
  if (bank >= kParamBanks || offset >= kBankWords) throw AddressError("debug write outside parameter memory");
  banks_[bank][offset] = word;
}

// ---------------------------------------------------------------------------

void StitchConfig::validate() const {
  for (std::size_t b = 0; b < kParamBanks; ++b) {
    const BankConfig& c = banks[b];
    const std::string where = "stitch bank " + std::to_string(b) + ": ";
    if (c.param_count > kBankWords) throw ConfigError(where + "param_count exceeds 2048");
    if (c.window_count != 0 &&
        (c.window_start >= c.param_count || c.window_start + c.window_count > c.param_count)) {
      throw ConfigError(where + "repeat window lies outside [0, param_count)");
    }
  }
  if (shots == 0) throw ConfigError("stitch shots must be positive");
  for (std::uint32_t id : mcm_core_ids) {
    if (id < kParamBanks) throw ConfigError("core id " + std::to_string(id) + " is a parameter bank, not an mcm route");
  }
}

Stitch::Stitch(const ParameterMemory& memory, StitchConfig config) : memory_(&memory), config_(std::move(config)) {
  config_.validate();
}

std::uint64_t Stitch::budget(std::size_t bank) const {
  return static_cast<std::uint64_t>(config_.banks[bank].param_count) * config_.shots;
}

std::uint64_t Stitch::total_served() const {
  std::uint64_t t = 0;
  for (auto s : served_) t += s;
  return t;
}

std::uint32_t Stitch::cursor(std::size_t bank) const {
  const BankConfig& c = config_.banks[bank];
  const std::uint64_t i = served_[bank];
  if (c.param_count == 0) return 0;
  if (i < c.param_count) return static_cast<std::uint32_t>(i);
  if (c.window_count != 0) return c.window_start + static_cast<std::uint32_t>((i - c.param_count) % c.window_count);
  return static_cast<std::uint32_t>(i % c.param_count);
}

StitchResponse Stitch::request(std::uint32_t core_id) {
  if (core_id >= kParamBanks) {
    if (config_.mcm_core_ids.count(core_id) == 0) {
      throw RoutingError("core id " + std::to_string(core_id) + " is neither a parameter bank nor an mcm route");
    }
    auto it = mcm_bits_.find(core_id);
    return StitchResponse{it == mcm_bits_.end() ? 0u : it->second, kRequestCycles};
  }
  if (served_[core_id] >= budget(core_id)) {
    throw UnderflowError("bank " + std::to_string(core_id) + " exhausted after " + std::to_string(served_[core_id]) +
                         " requests (" + std::to_string(config_.banks[core_id].param_count) + " words x " +
                         std::to_string(config_.shots) + " shots)");
  }
  const std::uint32_t word = memory_->read_param(core_id, cursor(core_id));
  ++served_[core_id];
  return StitchResponse{word, kRequestCycles};
}

void Stitch::post_measurement(std::uint32_t core_id, std::uint32_t bit) {
  if (config_.mcm_core_ids.count(core_id) == 0) {
    throw RoutingError("core id " + std::to_string(core_id) + " is not an mcm route");
  }
  mcm_bits_[core_id] = bit;
}

// ---------------------------------------------------------------------------

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::X90: return "X90";
    case EventKind::CZ: return "CZ";
    case EventKind::Measure: return "MEASURE";
    case EventKind::Delay: return "DELAY";
  }
  return "?";
}

std::string format_trace(const PulseTrace& trace) {
  std::string out;
  out.reserve(trace.size() * 48);
  char buf[96];
  for (const PulseEvent& e : trace) {
    if (e.kind == EventKind::CZ) {
      std::snprintf(buf, sizeof buf, "t=%llu ch=%u,%u kind=%s phase=0x%08X\n", static_cast<unsigned long long>(e.time_ns),
                    e.channel, e.channel2, event_kind_name(e.kind), e.frame_word);
    } else {
      std::snprintf(buf, sizeof buf, "t=%llu ch=%u kind=%s phase=0x%08X\n", static_cast<unsigned long long>(e.time_ns),
                    e.channel, event_kind_name(e.kind), e.frame_word);
    }
    out += buf;
  }
  return out;
}

std::map<std::string, std::uint64_t> ShotData::counts() const {
  std::map<std::string, std::uint64_t> m;
  for (const auto& shot : bits) {
    std::string s;
    s.reserve(shot.size());
    for (auto b : shot) s.push_back(b ? '1' : '0');
    ++m[s];
  }
  return m;
}

std::string ShotData::to_text() const {
  std::string out = "qubits";
  for (auto q : qubits) out += " q" + std::to_string(q);
  out += "\nshots " + std::to_string(bits.size()) + "\n";
  for (const auto& [k, v] : counts()) out += (k.empty() ? "-" : k) + " " + std::to_string(v) + "\n";
  return out;
}

namespace {

using Amp = std::complex<double>;

class StateVector {
 public:
  explicit StateVector(int n) : amps_(std::size_t{1} << n) { amps_[0] = 1.0; }

  // Z(-phi) X90 Z(phi) on qubit q.
  void framed_x90(int q, double phi) {
    const double r = 1.0 / std::sqrt(2.0);
    const Amp m01 = Amp(0, -1) * std::polar(1.0, phi) * r;
    const Amp m10 = Amp(0, -1) * std::polar(1.0, -phi) * r;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const Amp a0 = amps_[i];
      const Amp a1 = amps_[i | bit];
      amps_[i] = r * a0 + m01 * a1;
      amps_[i | bit] = m10 * a0 + r * a1;
    }
  }

  void cz(int a, int b) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if ((i & mask) == mask) amps_[i] = -amps_[i];
  }

  std::uint8_t measure(int q, double u) {
    const std::size_t bit = std::size_t{1} << q;
    double p1 = 0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      if (i & bit) p1 += std::norm(amps_[i]);
    const std::uint8_t outcome = u < p1 ? 1 : 0;
    const double keep = outcome ? p1 : 1.0 - p1;
    const double scale = keep > 0 ? 1.0 / std::sqrt(keep) : 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (((i & bit) != 0) == (outcome == 1)) {
        amps_[i] *= scale;
      } else {
        amps_[i] = 0;
      }
    }
    return outcome;
  }

 private:
  std::vector<Amp> amps_;
};

}  // namespace

ExecutionResult execute(const MachineProgram& m, Stitch* stitch, std::uint32_t shots, std::uint64_t seed,
                        const TimingConfig& timing) {
  const AssemblyProgram prog = disassemble(m);
  const std::size_t nq = prog.n_qubits;
  const bool sample = nq <= kMaxSampledQubits;

  ExecutionResult res;
  std::uint64_t shot_start = 0;
  std::vector<std::uint32_t> acc(nq);
  std::vector<std::uint64_t> line(nq);

  for (std::uint32_t shot = 0; shot < shots; ++shot) {
    std::fill(acc.begin(), acc.end(), 0u);
    std::fill(line.begin(), line.end(), shot_start);
    Rng rng(derive_seed(seed, {shot}));
    StateVector sv(sample ? static_cast<int>(nq) : 0);
    std::vector<std::uint8_t> shot_bits;
    std::vector<std::uint16_t> shot_qubits;

    for (std::size_t i = 0; i < prog.ops.size(); ++i) {
      const AsmOp& op = prog.ops[i];
      const std::uint16_t q = op.channel.index;
      try {
        switch (op.opcode) {
          case Opcode::PulseX90:
            res.trace.push_back(PulseEvent{line[q], q, 0, EventKind::X90, acc[q]});
            if (sample) sv.framed_x90(q, dequantize_phase(acc[q]).radians);
            line[q] += timing.x90_ns;
            res.cycle_count += 1;
            break;
          case Opcode::IncPhase:
            acc[q] += op.imm;
            res.cycle_count += 2;
            break;
          case Opcode::ReqParam: {
            if (stitch == nullptr) throw RoutingError("parameter request with no stitch configured");
            const StitchResponse r = stitch->request(q);
            acc[q] += r.word;
            res.cycle_count += r.latency_cycles;
            ++res.stitch_requests;
            break;
          }
          case Opcode::TwoQubit: {
            const std::uint16_t q2 = op.channel2.index;
            const std::uint64_t t = std::max(line[q], line[q2]);
            res.trace.push_back(PulseEvent{t, q, q2, EventKind::CZ, acc[q]});
            if (sample) sv.cz(q, q2);
            line[q] = line[q2] = t + timing.cz_ns;
            res.cycle_count += 1;
            break;
          }
          case Opcode::Measure: {
            res.trace.push_back(PulseEvent{line[q], q, 0, EventKind::Measure, acc[q]});
            line[q] += timing.measure_ns;
            const std::uint8_t bit = sample ? sv.measure(q, rng.uniform()) : 0;
            shot_bits.push_back(bit);
            shot_qubits.push_back(q);
            if (stitch != nullptr && stitch->config().mcm_core_ids.count(kParamBanks + q) != 0) {
              stitch->post_measurement(static_cast<std::uint32_t>(kParamBanks + q), bit);
            }
            res.cycle_count += 1;
            break;
          }
          case Opcode::Delay:
            res.trace.push_back(PulseEvent{line[q], q, 0, EventKind::Delay, acc[q]});
            line[q] += op.imm;
            res.cycle_count += 1;
            break;
          case Opcode::End:
            res.cycle_count += 1;
            break;
        }
      } catch (const Error& e) {
        rethrow_with_context(e, "shot " + std::to_string(shot) + " op " + std::to_string(i));
      }
    }
    if (shot == 0) res.data.qubits = shot_qubits;
    res.data.bits.push_back(std::move(shot_bits));
    shot_start = (nq == 0 ? shot_start : *std::max_element(line.begin(), line.end())) + timing.reset_ns;
  }
  res.timeline_ns = shot_start;
  return res;
}

}  // namespace pce
