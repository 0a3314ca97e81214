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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pce/batch_io.hpp"
#include "pce/profiling.hpp"
#include "pce/rpc.hpp"

namespace pce {

enum class Mode { Baseline, Pce };

const char* mode_name(Mode m);
/// Throws ConfigError for anything but "baseline" or "pce".
Mode parse_mode(const std::string& name);

/// Envelope and frequency tables sent once per run before any circuit.
LoadDefsMsg default_definitions();

struct ExperimentConfig {
  std::optional<BatchSpec> spec;        // generate in memory
  std::filesystem::path batch;          // or read from a manifest / directory
  Mode mode = Mode::Pce;
  std::uint64_t seed = 0;
  std::uint32_t shots = 0;              // 0: the batch's own shot counts
  std::uint32_t reset_ns = 500;
  bool socket = false;
  std::filesystem::path out;
  std::filesystem::path blob;           // cmd_verify: check this blob instead of a fresh one
};

struct Experiment {
  Mode mode = Mode::Pce;
  std::string batch_hash;
  std::size_t circuit_count = 0;
  std::size_t group_count = 0;
  RunResult run;
  std::vector<PulseTrace> traces;       // by circuit index
  ProfileRecord profile;
  std::vector<std::uint8_t> blob;       // PCE only
  std::map<std::uint32_t, MachineProgram> programs;  // by circuit index
  std::vector<std::map<std::string, std::uint64_t>> counts;  // Data Sort output
};

struct ExperimentOptions {
  std::uint64_t seed = 0;
  std::uint32_t shots = 0;
  TimingConfig timing;
  bool socket = false;
  bool keep_traces = true;
};

/// Full pipeline over an in-memory batch with every stage profiled. Baseline
/// compiles and loads every circuit; PCE runs RIP, compiles the uniques and
/// hands them to the deft scheduler.
Experiment run_experiment(const std::vector<Circuit>& circuits, Mode mode, const ExperimentOptions& options);
/// As above; `source` runs inside the Get circuit stage.
Experiment run_experiment(const std::function<std::vector<Circuit>()>& source, Mode mode,
                          const ExperimentOptions& options);

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string counterexample;
};

struct VerifyOptions {
  std::uint32_t shots = 0;  // 0: min(circuit shots, 10)
  std::uint64_t seed = 0;
  std::optional<std::vector<std::uint8_t>> blob;
  TimingConfig timing;
};

/// Round-trip, dedup-oracle, unitary, blob-integrity and trace-equivalence
/// suites. Stops each suite at its first counterexample.
std::vector<SuiteResult> verify_batch(const std::vector<Circuit>& circuits, const std::vector<CircuitLabel>& labels,
                                      const VerifyOptions& options);

// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

int exit_code_for(const Error& e);

/// Each command writes a short human-readable summary to `log` and returns an
/// exit status; library errors are caught and mapped through exit_code_for.
int cmd_generate(const ExperimentConfig& config, std::ostream& log);
int cmd_run(const ExperimentConfig& config, std::ostream& log);
int cmd_verify(const ExperimentConfig& config, std::ostream& log);
int cmd_compare(const std::filesystem::path& baseline_report, const std::filesystem::path& pce_report,
                const std::filesystem::path& out, std::ostream& log);

}  // namespace pce
