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

#include <iostream>

#include "CLI11.hpp"
#include "pce/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string preset;
  std::string batch;
  std::string mode = "pce";
  std::uint64_t seed = 0;
  std::uint32_t shots = 0;
  std::uint32_t reset_ns = 500;
  bool socket = false;
  std::string out;
  std::string blob;
};

void add_batch_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Batch spec JSON file");
  cmd->add_option("--preset", f.preset, "Built-in batch spec: rc20, frc, cb, rb");
  cmd->add_option("--batch", f.batch, "Batch directory or manifest written by 'generate'");
}

pce::ExperimentConfig to_config(const CommonFlags& f, const CLI::App* cmd) {
  pce::ExperimentConfig c;
  const bool seed_given = cmd->count("--seed") > 0;
  if (!f.config.empty()) {
    c.spec = pce::load_spec(f.config);
    if (seed_given) c.spec->seed = f.seed;
  } else if (!f.preset.empty()) {
    c.spec = pce::preset_spec(f.preset, seed_given ? f.seed : 2024);
  }
  c.batch = f.batch;
  c.mode = pce::parse_mode(f.mode);
  c.seed = f.seed;
  c.shots = f.shots;
  c.reset_ns = f.reset_ns;
  c.socket = f.socket;
  c.out = f.out;
  c.blob = f.blob;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameterized circuit execution: batch generation, RIP, simulated control stack, profiling"};
  app.require_subcommand(1);
  CommonFlags f;
  std::string baseline_report, pce_report;

  auto* gen = app.add_subcommand("generate", "Write a batch of circuit files and its manifest");
  add_batch_flags(gen, f);
  gen->add_option("--seed", f.seed, "Generator seed (overrides the spec)");
  gen->add_option("--out", f.out, "Output directory")->required();

  auto* run = app.add_subcommand("run", "Execute a batch in baseline or PCE mode");
  add_batch_flags(run, f);
  run->add_option("--mode", f.mode, "baseline or pce")->check(CLI::IsMember({"baseline", "pce"}));
  run->add_option("--seed", f.seed, "Measurement sampling seed");
  run->add_option("--shots", f.shots, "Shots per circuit (0 keeps each circuit's own)");
  run->add_option("--reset-ns", f.reset_ns, "Passive reset delay between shots");
  run->add_flag("--socket", f.socket, "Carry RPC over a local stream socket");
  run->add_option("--out", f.out, "Output directory")->required();

  auto* ver = app.add_subcommand("verify", "Run the oracle suites over a batch");
  add_batch_flags(ver, f);
  ver->add_option("--seed", f.seed, "Measurement sampling seed");
  ver->add_option("--shots", f.shots, "Shots per circuit (0: at most 10)");
  ver->add_option("--reset-ns", f.reset_ns, "Passive reset delay between shots");
  ver->add_option("--blob", f.blob, "Check this parameter blob against the batch");
  ver->add_option("--out", f.out, "Directory for verify.json");

  auto* cmp = app.add_subcommand("compare", "Speedup table from two profile reports");
  cmp->add_option("baseline", baseline_report, "Baseline profile.json")->required();
  cmp->add_option("pce", pce_report, "PCE profile.json")->required();
  cmp->add_option("--out", f.out, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : pce::kExitUsage;
  }

  try {
    if (*cmp) return pce::cmd_compare(baseline_report, pce_report, f.out, std::cout);
    CLI::App* sub = *gen ? gen : (*run ? run : ver);
    const pce::ExperimentConfig config = to_config(f, sub);
    if (*gen) return pce::cmd_generate(config, std::cout);
    if (*run) return pce::cmd_run(config, std::cout);
    return pce::cmd_verify(config, std::cout);
  } catch (const pce::Error& e) {
    std::cerr << "error (" << pce::error_code_name(e.code()) << "): " << e.what() << "\n";
    return pce::exit_code_for(e);
  }
}
