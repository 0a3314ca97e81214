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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "pce/harness.hpp"
#include "pce/param_blob.hpp"

using namespace pce;
namespace fs = std::filesystem;

namespace {

Width prefix(std::uint16_t n) {
  Width w;
  for (std::uint16_t q = 0; q < n; ++q) w.push_back(QubitId{q});
  return w;
}

BatchSpec desk_rb() {
  BatchSpec s;
  s.kind = BatchKind::RB;
  s.widths = {prefix(1), prefix(2), prefix(3)};
  s.depths = {{2, 6}};
  s.randomizations = 4;
  s.shots = 6;
  s.seed = 31;
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pce_harness_" + name);
  fs::remove_all(p);
  return p;
}

const SuiteResult& suite(const std::vector<SuiteResult>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("no suite " + name);
}

}  // namespace

TEST(Mode, Names) {
  EXPECT_EQ(parse_mode("baseline"), Mode::Baseline);
  EXPECT_EQ(parse_mode("pce"), Mode::Pce);
  EXPECT_STREQ(mode_name(Mode::Pce), "pce");
  EXPECT_THROW(parse_mode("fast"), ConfigError);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(CapacityError(0, 1, "x")), kExitRuntime);
  EXPECT_EQ(exit_code_for(UnderflowError("x")), kExitRuntime);
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitUsage);
  EXPECT_EQ(exit_code_for(ComparisonError("x")), kExitUsage);
}

TEST(CmdGenerate, UsageErrors) {
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.out = scratch("gen_usage");
  EXPECT_EQ(cmd_generate(cfg, log), kExitUsage);
  BatchSpec s = desk_rb();
  s.widths.clear();
  cfg.spec = s;
  EXPECT_EQ(cmd_generate(cfg, log), kExitUsage);
  EXPECT_NE(log.str().find("widths"), std::string::npos);
  cfg.spec = desk_rb();
  cfg.out.clear();
  EXPECT_EQ(cmd_generate(cfg, log), kExitUsage);
}

TEST(CmdGenerate, DeterministicFiles) {
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.spec = desk_rb();
  cfg.out = scratch("gen_a");
  ASSERT_EQ(cmd_generate(cfg, log), kExitOk);
  const fs::path a = cfg.out;
  cfg.out = scratch("gen_b");
  ASSERT_EQ(cmd_generate(cfg, log), kExitOk);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    EXPECT_EQ(read_file(e.path()), read_file(cfg.out / fs::relative(e.path(), a))) << e.path();
  }
  EXPECT_GT(files, 2 * 4u * 3u);
  EXPECT_EQ(read_batch(a).circuits.size(), generate(desk_rb()).circuits.size());
}

TEST(RunExperiment, ModesAgreeAndIterationsMatchGroups) {
  const CircuitBatch b = generate(desk_rb());
  ExperimentOptions eo;
  eo.seed = 5;
  const Experiment base = run_experiment(b.circuits, Mode::Baseline, eo);
  const Experiment pce = run_experiment(b.circuits, Mode::Pce, eo);
  EXPECT_EQ(base.batch_hash, pce.batch_hash);
  EXPECT_EQ(base.traces, pce.traces);
  EXPECT_EQ(base.counts, pce.counts);
  ASSERT_EQ(base.run.runs.size(), pce.run.runs.size());
  for (std::size_t i = 0; i < base.run.runs.size(); ++i) EXPECT_EQ(base.run.runs[i].data, pce.run.runs[i].data);
  const std::uint64_t n = b.circuits.size(), g = pce.group_count;
  EXPECT_LT(g, n);
  for (Stage s : {Stage::Compile, Stage::Assemble, Stage::LoadCircuit}) {
    EXPECT_EQ(base.profile.iterations(s), n) << stage_name(s);
    EXPECT_EQ(pce.profile.iterations(s), g) << stage_name(s);
  }
  EXPECT_EQ(pce.profile.iterations(Stage::LoadPara), n);
  for (Stage s : all_stages()) EXPECT_TRUE(pce.profile.entered(s)) << stage_name(s);
  EXPECT_FALSE(base.profile.entered(Stage::Rip));
  EXPECT_TRUE(pce.profile.nesting_consistent());
  EXPECT_EQ(pce.profile.duration(Stage::Active), 0u);
}

TEST(RunExperiment, SingleCircuitBaseline) {
  const CircuitBatch b = generate(desk_rb());
  const Experiment e = run_experiment(std::vector<Circuit>{b.circuits[0]}, Mode::Baseline, ExperimentOptions{});
  EXPECT_EQ(e.profile.iterations(Stage::Compile), 1u);
}

TEST(Verify, PristineBatchPasses) {
  const CircuitBatch b = generate(desk_rb());
  const auto rs = verify_batch(b.circuits, b.labels, VerifyOptions{});
  ASSERT_EQ(rs.size(), 5u);
  for (const auto& r : rs) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.counterexample;
    EXPECT_GT(r.checked, 0u) << r.name;
  }
}

TEST(Verify, EmptyBatchPassesVacuously) {
  const auto rs = verify_batch({}, {}, VerifyOptions{});
  for (const auto& r : rs) EXPECT_TRUE(r.passed) << r.name;
}

TEST(Verify, CorruptedBlobWordNamesCircuitAndQubit) {
  const CircuitBatch b = generate(desk_rb());
  const RipResult r = rip(b.circuits);
  auto blob = binarize(r.report, r.table);
  // Byte offset of circuit 0, qubit 0, word 1.
  const std::size_t n = b.circuits.size();
  const std::size_t at = 16 + 4 * n + (n + 7) / 8 + 2 + 4 * 1;
  ASSERT_GT(r.table.circuits[0][0].size(), 1u);
  blob[at] ^= 0x5A;
  VerifyOptions vo;
  vo.blob = blob;
  const auto rs = verify_batch(b.circuits, b.labels, vo);
  const SuiteResult& s = suite(rs, "blob-integrity");
  EXPECT_FALSE(s.passed);
  EXPECT_NE(s.counterexample.find("circuit 0"), std::string::npos) << s.counterexample;
  EXPECT_NE(s.counterexample.find("qubit 0"), std::string::npos) << s.counterexample;
  EXPECT_NE(s.counterexample.find("word 1"), std::string::npos) << s.counterexample;
}

TEST(CmdVerify, ExitCodesAndReport) {
  const fs::path dir = scratch("verify");
  write_batch(generate(desk_rb()), dir / "batch");
  const CircuitBatch b = generate(desk_rb());
  const RipResult r = rip(b.circuits);
  auto blob = binarize(r.report, r.table);
  write_file(dir / "good.blob", std::string(blob.begin(), blob.end()));
  blob[blob.size() - 9] ^= 1;
  write_file(dir / "bad.blob", std::string(blob.begin(), blob.end()));

  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.batch = dir / "batch";
  cfg.out = dir / "out";
  cfg.blob = dir / "good.blob";
  EXPECT_EQ(cmd_verify(cfg, log), kExitOk) << log.str();
  const auto doc = nlohmann::json::parse(read_file(dir / "out" / "verify.json"));
  EXPECT_TRUE(doc.at("passed").get<bool>());
  cfg.blob = dir / "bad.blob";
  EXPECT_EQ(cmd_verify(cfg, log), kExitVerifyFailed);
  EXPECT_NE(log.str().find("FAIL blob-integrity"), std::string::npos);
  cfg.batch = dir / "missing";
  cfg.blob.clear();
  EXPECT_NE(cmd_verify(cfg, log), kExitOk);
}

TEST(CmdRun, OutputsAndCompare) {
  const fs::path dir = scratch("run");
  write_batch(generate(desk_rb()), dir / "batch");
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.batch = dir / "batch";
  cfg.seed = 3;
  cfg.mode = Mode::Baseline;
  cfg.out = dir / "baseline";
  ASSERT_EQ(cmd_run(cfg, log), kExitOk) << log.str();
  cfg.mode = Mode::Pce;
  cfg.out = dir / "pce";
  cfg.socket = true;
  ASSERT_EQ(cmd_run(cfg, log), kExitOk) << log.str();
  EXPECT_EQ(read_file(dir / "baseline" / "shots.json"), read_file(dir / "pce" / "shots.json"));
  EXPECT_EQ(read_file(dir / "baseline" / "traces" / "c00000.trace"), read_file(dir / "pce" / "traces" / "c00000.trace"));
  EXPECT_TRUE(fs::exists(dir / "pce" / "params.blob"));
  EXPECT_FALSE(fs::exists(dir / "baseline" / "params.blob"));
  const auto bs = nlohmann::json::parse(read_file(dir / "baseline" / "summary.json"));
  const auto ps = nlohmann::json::parse(read_file(dir / "pce" / "summary.json"));
  EXPECT_EQ(bs.at("simulated_start_run_ns"), ps.at("simulated_start_run_ns"));
  EXPECT_EQ(bs.at("compile_iterations"), bs.at("n_circuits"));
  EXPECT_EQ(ps.at("compile_iterations"), ps.at("groups"));

  ASSERT_EQ(cmd_compare(dir / "baseline" / "profile.json", dir / "pce" / "profile.json", dir / "speedup.json", log),
            kExitOk);
  const auto sp = nlohmann::json::parse(read_file(dir / "speedup.json"));
  for (const auto& row : sp.at("stages")) {
    if (row.at("stage") == "Compile") {
      EXPECT_DOUBLE_EQ(row.at("iteration_ratio").get<double>(),
                       bs.at("n_circuits").get<double>() / ps.at("groups").get<double>());
    }
  }
  ASSERT_EQ(cmd_compare(dir / "pce" / "profile.json", dir / "pce" / "profile.json", dir / "self.json", log), kExitOk);
  for (const auto& row : nlohmann::json::parse(read_file(dir / "self.json")).at("stages")) {
    EXPECT_DOUBLE_EQ(row.at("iteration_ratio").get<double>(), 1.0);
  }

  BatchSpec other = desk_rb();
  other.seed = 99;
  ExperimentConfig ocfg;
  ocfg.spec = other;
  ocfg.out = dir / "other";
  ASSERT_EQ(cmd_run(ocfg, log), kExitOk);
  EXPECT_EQ(cmd_compare(dir / "baseline" / "profile.json", dir / "other" / "profile.json", dir / "x.json", log),
            kExitUsage);
  EXPECT_NE(log.str().find("comparison"), std::string::npos);
}

TEST(CmdRun, CapacityFailureNamesCircuit) {
  const fs::path dir = scratch("capacity");
  CircuitBatch b = generate(desk_rb());
  Circuit big;
  big.n_qubits = 2;
  big.shots = 1;
  for (int i = 0; i < 2050; ++i) big.gates.push_back(Gate::vz(QubitId{1}, Phase{0.25}));
  b.circuits.push_back(big);
  b.labels.push_back(CircuitLabel{0, 0, 0, "external"});
  write_batch(b, dir / "batch");
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.batch = dir / "batch";
  cfg.out = dir / "out";
  EXPECT_EQ(cmd_run(cfg, log), kExitRuntime);
  EXPECT_NE(log.str().find("circuit " + std::to_string(b.circuits.size() - 1)), std::string::npos) << log.str();
  EXPECT_NE(log.str().find("qubit 1"), std::string::npos) << log.str();
  cfg.mode = Mode::Baseline;
  EXPECT_EQ(cmd_run(cfg, log), kExitOk);
}

TEST(CmdRun, MissingBatchIsUsageError) {
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.out = scratch("nobatch");
  EXPECT_EQ(cmd_run(cfg, log), kExitUsage);
}
