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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pce/pulse_compiler.hpp"

namespace pce {

inline constexpr std::size_t kParamBanks = 8;
inline constexpr std::size_t kBankWords = 2048;

/// 14-bit parameter-memory address: 3 bank bits over 11 offset bits.
struct MemoryAddress {
  std::uint8_t bank = 0;
  std::uint16_t offset = 0;

  friend bool operator==(const MemoryAddress&, const MemoryAddress&) = default;
};

/// Throws AddressError if any bit above bit 13 is set.
MemoryAddress addr_map(std::uint32_t axi);

/// Eight independent 2048-word banks, one per qubit.
class ParameterMemory {
 public:
  ParameterMemory();

  /// Writes `words` to bank starting at `offset`. Throws AddressError for a
  /// bad bank, CapacityError (naming the bank as qubit) past word 2047.
  void write_params(std::size_t bank, std::span<const std::uint32_t> words, std::size_t offset = 0);
  std::uint32_t read_param(std::size_t bank, std::size_t offset) const;

  /// Controller-side write through a 32-bit AXI address.
  void axi_write(std::uint32_t axi, std::uint32_t word);

  // Secondary ports of the dual-port banks. Disabled unless debug is on;
  // otherwise they throw UnsupportedOperation.
  void set_debug(bool on) { debug_ = on; }
  bool debug() const { return debug_; }
  std::uint32_t debug_read(std::uint32_t axi) const;
  void debug_write(std::size_t bank, std::size_t offset, std::uint32_t word);

  void clear();

 private:
  std::vector<std::array<std::uint32_t, kBankWords>> banks_;
  bool debug_ = false;
};

struct BankConfig {
  std::uint32_t param_count = 0;
  std::uint32_t window_start = 0;
  std::uint32_t window_count = 0;  // 0: repeat the full set every shot
};

struct StitchConfig {
  std::array<BankConfig, kParamBanks> banks{};
  std::uint32_t shots = 1;
  std::set<std::uint32_t> mcm_core_ids;

  /// Window inside [0, param_count), param_count <= 2048, mcm ids >= 8.
  /// Throws ConfigError.
  void validate() const;
};

struct StitchResponse {
  std::uint32_t word = 0;
  std::uint32_t latency_cycles = 0;
};

/// Serves parameter words to executing circuits. Core ids 0-7 address the
/// parameter banks; ids listed in mcm_core_ids return the most recently
/// posted measurement bit and leave every parameter cursor untouched.
class Stitch {
 public:
  static constexpr std::uint32_t kRequestCycles = 2;

  Stitch(const ParameterMemory& memory, StitchConfig config);

  /// Throws UnderflowError once a bank has served param_count × shots words,
  /// RoutingError for an unknown core id.
  StitchResponse request(std::uint32_t core_id);
  void post_measurement(std::uint32_t core_id, std::uint32_t bit);

  std::uint64_t served(std::size_t bank) const { return served_[bank]; }
  std::uint64_t total_served() const;
  std::uint64_t budget(std::size_t bank) const;
  const StitchConfig& config() const { return config_; }
  /// Offset in the bank that the next request on `bank` reads.
  std::uint32_t cursor(std::size_t bank) const;

 private:
  const ParameterMemory* memory_;
  StitchConfig config_;
  std::array<std::uint64_t, kParamBanks> served_{};
  std::map<std::uint32_t, std::uint32_t> mcm_bits_;
};

struct TimingConfig {
  std::uint32_t x90_ns = 16;
  std::uint32_t cz_ns = 100;
  std::uint32_t measure_ns = 500;
  std::uint32_t reset_ns = 500;
  std::uint32_t ns_per_cycle = 2;

  friend bool operator==(const TimingConfig&, const TimingConfig&) = default;
};

enum class EventKind : std::uint8_t { X90, CZ, Measure, Delay };

const char* event_kind_name(EventKind k);

struct PulseEvent {
  std::uint64_t time_ns = 0;
  std::uint16_t channel = 0;
  std::uint16_t channel2 = 0;  // CZ only
  EventKind kind = EventKind::X90;
  std::uint32_t frame_word = 0;

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

using PulseTrace = std::vector<PulseEvent>;

/// One line per event: `t=<ns> ch=<q> kind=<k> phase=0x<8 hex>`; CZ events
/// list both channels as `ch=<a>,<b>`.
std::string format_trace(const PulseTrace& trace);

struct ShotData {
  std::vector<std::uint16_t> qubits;             // measured qubits, program order
  std::vector<std::vector<std::uint8_t>> bits;   // [shot][index into qubits]

  /// Bitstring (qubits[0] first) -> count.
  std::map<std::string, std::uint64_t> counts() const;
  std::string to_text() const;

  friend bool operator==(const ShotData&, const ShotData&) = default;
};

struct ExecutionResult {
  PulseTrace trace;
  ShotData data;
  std::uint64_t cycle_count = 0;
  std::uint64_t timeline_ns = 0;  // end of the last shot, reset included
  std::uint64_t stitch_requests = 0;

  /// Simulated Start Run time: cycles at 2 ns plus the pulse timeline.
  std::uint64_t start_run_ns(const TimingConfig& t) const { return cycle_count * t.ns_per_cycle + timeline_ns; }
};

/// Measurement outcomes are sampled from the exact state only up to this width.
inline constexpr std::uint16_t kMaxSampledQubits = 4;

/// Runs `shots` repetitions of `m`. Each shot starts with every phase
/// accumulator at zero. IncPhase adds its immediate, ReqParam adds the word
/// served by `stitch` (which may be null for programs without ReqParam), and
/// X90 events carry the accumulator at emission. Stitch errors are rethrown
/// with the shot and op index.
ExecutionResult execute(const MachineProgram& m, Stitch* stitch, std::uint32_t shots, std::uint64_t seed,
                        const TimingConfig& timing = {});

}  // namespace pce
