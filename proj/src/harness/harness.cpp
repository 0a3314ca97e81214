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

#include "pce/harness.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

#include "pce/bytes.hpp"
#include "pce/oracles.hpp"
#include "pce/phase.hpp"
#include "pce/unitary.hpp"

namespace pce {

using nlohmann::json;
namespace fs = std::filesystem;

const char* mode_name(Mode m) { return m == Mode::Baseline ? "baseline" : "pce"; }

Mode parse_mode(const std::string& name) {
  if (name == "baseline") return Mode::Baseline;
  if (name == "pce") return Mode::Pce;
  throw ConfigError("unknown mode '" + name + "' (expected baseline or pce)");
}

LoadDefsMsg default_definitions() {
  LoadDefsMsg d;
  // 64-sample Gaussian X90 envelope, 16-bit amplitude.
  for (int i = 0; i < 64; ++i) {
    const double x = (i - 31.5) / 10.0;
    d.envelope.push_back(static_cast<std::uint32_t>(std::lround(65535.0 * std::exp(-0.5 * x * x))));
  }
  // Drive frequency per channel in kHz.
  for (std::uint32_t q = 0; q < kParamBanks; ++q) d.frequency.push_back(4'800'000 + 120'000 * q);
  return d;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Capacity:
    case ErrorCode::Underflow:
    case ErrorCode::Routing:
    case ErrorCode::Scheduling:
    case ErrorCode::Address:
      return kExitRuntime;
    default:
      return kExitUsage;
  }
}

// ---------------------------------------------------------------------------

Experiment run_experiment(const std::vector<Circuit>& circuits, Mode mode, const ExperimentOptions& options) {
  return run_experiment([&circuits] { return circuits; }, mode, options);
}

Experiment run_experiment(const std::function<std::vector<Circuit>()>& source, Mode mode,
                          const ExperimentOptions& options) {
  Experiment ex;
  ex.mode = mode;
  ProfileRecord& rec = ex.profile;
  rec.mode = mode_name(mode);
  Profiler prof(rec);

  ControlServer server(options.timing);
  if (options.keep_traces) {
    server.set_trace_sink([&ex](std::uint32_t index, const ExecutionResult& r) {
      if (index >= ex.traces.size()) ex.traces.resize(index + 1);
      ex.traces[index] = r.trace;
    });
  }
  std::unique_ptr<Channel> channel;
  if (options.socket) {
    channel = std::make_unique<SocketChannel>(server);
  } else {
    channel = std::make_unique<InProcessChannel>(server);
  }
  Session session(*channel);
  RunOptions run_opts;
  run_opts.seed = options.seed;
  run_opts.shots = options.shots;
  run_opts.definitions = default_definitions();

  std::vector<Circuit> circuits;
  {
    auto total = prof.scope(Stage::Total);
    {
      auto pre = prof.scope(Stage::PreCompile);
      {
        auto get = prof.scope(Stage::GetCircuit);
        circuits = source();
      }
      auto transpile = prof.scope(Stage::Transpile);
      for (const Circuit& c : circuits) validate(c);
    }
    ex.circuit_count = circuits.size();
    ex.traces.resize(circuits.size());
    rec.add(Stage::Active, 0, 1);

    std::optional<RipResult> ripped;
    if (mode == Mode::Pce) {
      auto rip_scope = prof.scope(Stage::Rip);
      ripped = rip(circuits);
      ex.blob = binarize(ripped->report, ripped->table);
      ex.group_count = ripped->report.group_count();
    } else {
      ex.group_count = circuits.size();
    }

    auto build = prof.scope(Stage::BuildRun);
    const auto build_program = [&](const Circuit& c) {
      AssemblyProgram a;
      {
        auto s = prof.scope(Stage::Compile);
        a = compile(c);
      }
      auto s = prof.scope(Stage::Assemble);
      return assemble(a);
    };
    if (ripped) {
      const auto reps = ripped->report.representatives();
      for (std::size_t g = 0; g < reps.size(); ++g) ex.programs[reps[g]] = build_program(ripped->uniques[g]);
    } else {
      for (std::uint32_t i = 0; i < circuits.size(); ++i) ex.programs[i] = build_program(circuits[i]);
    }

    auto run_all = prof.scope(Stage::RunAllOnHost);
    {
      auto run_host = prof.scope(Stage::RunOnHost);
      if (ripped) {
        ex.run = deft_run(ex.programs, std::span<const std::uint8_t>(ex.blob), session, run_opts);
      } else {
        std::vector<MachineProgram> progs;
        progs.reserve(ex.programs.size());
        for (auto& [i, p] : ex.programs) progs.push_back(p);
        ex.run = baseline_run(progs, session, run_opts);
      }
    }
    auto sort = prof.scope(Stage::DataSort);
    ex.counts.reserve(ex.run.runs.size());
    for (const CircuitRun& r : ex.run.runs) ex.counts.push_back(r.data.counts());
  }
  rec.batch_hash = batch_hash(circuits);
  ex.batch_hash = rec.batch_hash;
  const std::uint64_t transport = session.transport_ns();
  channel.reset();
  rec.merge(server.profile());
  rec.carve(Stage::ClientServer, transport, {Stage::RunOnHost, Stage::RunAllOnHost});
  return ex;
}

// ---------------------------------------------------------------------------

namespace {

std::string hex32(std::uint32_t w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", w);
  return buf;
}

SuiteResult suite_round_trip(const std::vector<Circuit>& circuits) {
  SuiteResult r{"round-trip", true, 0, {}};
  const auto fail = [&](std::size_t i, const std::string& what) {
    r.passed = false;
    r.counterexample = "circuit " + std::to_string(i) + ": " + what;
  };
  for (std::size_t i = 0; i < circuits.size() && r.passed; ++i) {
    try {
      if (!(parse_circuit(to_text(circuits[i])) == circuits[i])) {
        fail(i, "text form does not parse back to the same circuit");
        break;
      }
      const MachineProgram m = assemble(compile(circuits[i]));
      if (!(read_machine_file(write_machine_file(m)) == m)) {
        fail(i, "machine file does not read back to the same program");
        break;
      }
      const Message msg = LoadCircuitMsg{static_cast<std::uint32_t>(i), m};
      if (!(rpc_decode(rpc_encode(msg)) == msg)) {
        fail(i, "LOAD_CIRCUIT frame does not decode to the same message");
        break;
      }
    } catch (const Error& e) {
      fail(i, e.what());
      break;
    }
    ++r.checked;
  }
  if (r.passed && !circuits.empty()) {
    try {
      const RipResult rr = rip(circuits);
      const DecodedBlob d = debinarize(binarize(rr.report, rr.table));
      if (!(d.report == rr.report) || !(d.table == rr.table)) {
        r.passed = false;
        r.counterexample = "parameter blob does not decode to the same report and table";
      }
    } catch (const Error& e) {
      r.passed = false;
      r.counterexample = std::string("parameter blob: ") + e.what();
    }
  }
  return r;
}

SuiteResult suite_dedup(const std::vector<Circuit>& circuits) {
  SuiteResult r{"dedup-oracle", true, circuits.size(), {}};
  const auto got = identify(circuits).groups();
  const auto want = oracle::brute_force_partition(circuits);
  if (got != want) {
    r.passed = false;
    const std::size_t n = std::min(got.size(), want.size());
    std::size_t g = 0;
    while (g < n && got[g] == want[g]) ++g;
    r.counterexample = "group " + std::to_string(g) + " differs from the all-pairs partition (" +
                       std::to_string(got.size()) + " vs " + std::to_string(want.size()) + " groups)";
  }
  return r;
}

// Bit flip on every qubit the circuit touches.
UnitaryMatrix flip_touched(const Circuit& c) {
  std::size_t mask = 0;
  for (const Gate& g : c.gates) {
    mask |= std::size_t{1} << g.q0.index;
    if (g.kind == GateKind::TwoQubit) mask |= std::size_t{1} << g.q1.index;
  }
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  UnitaryMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) out(i ^ mask, i) = 1;
  return out;
}

SuiteResult suite_unitary(const std::vector<Circuit>& circuits, const std::vector<CircuitLabel>& labels) {
  SuiteResult r{"unitary", true, 0, {}};
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const Circuit& c = circuits[i];
    if (c.n_qubits > 4) continue;
    try {
      const Circuit bare = strip_measurements(c);
      const UnitaryMatrix u = circuit_unitary(bare);
      std::size_t phases = 0;
      for (const Gate& g : c.gates) phases += g.kind == GateKind::VirtualZ;
      const double qtol = 1e-9 + static_cast<double>(phases) * kQuantizationTolerance;
      const UnitaryMatrix back = circuit_unitary(strip_measurements(restitch(modify(c), peel(c))));
      if (!equal_up_to_global_phase(u, back, qtol)) {
        r.passed = false;
        r.counterexample = "circuit " + std::to_string(i) + ": peeled and restitched unitary differs by " +
                           std::to_string(phase_insensitive_distance(u, back));
        return r;
      }
      const std::string role = i < labels.size() ? labels[i].role : "";
      std::optional<UnitaryMatrix> expect;
      if (role == "rb" || role == "read0") expect = UnitaryMatrix::identity(u.dim());
      if (role == "read1") expect = flip_touched(c);
      if (expect && !equal_up_to_global_phase(u, *expect, 1e-9)) {
        r.passed = false;
        r.counterexample = "circuit " + std::to_string(i) + " (" + role + "): net unitary is off by " +
                           std::to_string(phase_insensitive_distance(u, *expect));
        return r;
      }
    } catch (const Error& e) {
      r.passed = false;
      r.counterexample = "circuit " + std::to_string(i) + ": " + e.what();
      return r;
    }
    ++r.checked;
  }
  return r;
}

SuiteResult suite_blob(const std::vector<Circuit>& circuits, const std::optional<std::vector<std::uint8_t>>& supplied) {
  SuiteResult r{"blob-integrity", true, 0, {}};
  if (circuits.empty() && !supplied) return r;
  try {
    std::vector<std::uint8_t> blob;
    if (supplied) {
      blob = *supplied;
    } else {
      const RipResult rr = rip(circuits);
      blob = binarize(rr.report, rr.table);
    }
    const DecodedBlob d = debinarize(blob, false);
    if (d.table.circuits.size() != circuits.size()) {
      r.passed = false;
      r.counterexample = "blob holds " + std::to_string(d.table.circuits.size()) + " circuits, batch has " +
                         std::to_string(circuits.size());
      return r;
    }
    for (std::size_t i = 0; i < circuits.size(); ++i) {
      const auto want = oracle::phase_words(circuits[i]);
      const QubitWords& got = d.table.circuits[i];
      for (std::size_t q = 0; q < std::max(want.size(), got.size()); ++q) {
        static const std::vector<std::uint32_t> kNone;
        const auto& w = q < want.size() ? want[q] : kNone;
        const auto& g = q < got.size() ? got[q] : kNone;
        if (w == g) continue;
        r.passed = false;
        std::size_t k = 0;
        while (k < w.size() && k < g.size() && w[k] == g[k]) ++k;
        r.counterexample = "circuit " + std::to_string(i) + " qubit " + std::to_string(q);
        if (k < w.size() && k < g.size()) {
          r.counterexample += " word " + std::to_string(k) + ": blob " + hex32(g[k]) + ", circuit " + hex32(w[k]);
        } else {
          r.counterexample += ": blob has " + std::to_string(g.size()) + " words, circuit has " + std::to_string(w.size());
        }
        return r;
      }
      ++r.checked;
    }
    if (!(d.report == identify(circuits))) {
      r.passed = false;
      r.counterexample = "blob grouping differs from identify()";
    } else if (!d.crc_ok) {
      r.passed = false;
      r.counterexample = "blob CRC-32 mismatch";
    }
  } catch (const Error& e) {
    r.passed = false;
    r.counterexample = e.what();
  }
  return r;
}

SuiteResult suite_traces(const std::vector<Circuit>& circuits, const VerifyOptions& o) {
  SuiteResult r{"trace-equivalence", true, 0, {}};
  if (circuits.empty()) return r;
  std::vector<Circuit> batch = circuits;
  if (o.shots == 0) {
    for (Circuit& c : batch) c.shots = std::min<std::uint32_t>(c.shots, 10);
  }
  ExperimentOptions eo;
  eo.seed = o.seed;
  eo.shots = o.shots;
  eo.timing = o.timing;
  try {
    const Experiment base = run_experiment(batch, Mode::Baseline, eo);
    const Experiment pce = run_experiment(batch, Mode::Pce, eo);
    std::uint64_t expected_requests = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const std::uint32_t shots = o.shots != 0 ? o.shots : batch[i].shots;
      std::uint64_t vz = 0;
      for (const Gate& g : batch[i].gates) vz += g.kind == GateKind::VirtualZ;
      expected_requests += vz * shots;
      const std::string at = "circuit " + std::to_string(i) + ": ";
      if (auto m = oracle::first_trace_mismatch(base.traces[i], pce.traces[i])) {
        r.passed = false;
        r.counterexample = at + m->detail;
        return r;
      }
      const CircuitRun& a = base.run.runs[i];
      const CircuitRun& b = pce.run.runs[i];
      if (!(a.data == b.data)) {
        r.passed = false;
        r.counterexample = at + "shot data differ";
        return r;
      }
      if (a.cycle_count != b.cycle_count || a.timeline_ns != b.timeline_ns) {
        r.passed = false;
        r.counterexample = at + "cycle count or timeline differ";
        return r;
      }
      ++r.checked;
    }
    std::uint64_t served = 0;
    for (const CircuitRun& run : pce.run.runs) served += run.stitch_requests;
    if (served != expected_requests) {
      r.passed = false;
      r.counterexample = "stitch served " + std::to_string(served) + " words, phase gates x shots = " +
                         std::to_string(expected_requests);
    }
  } catch (const Error& e) {
    r.passed = false;
    r.counterexample = e.what();
  }
  return r;
}

}  // namespace

std::vector<SuiteResult> verify_batch(const std::vector<Circuit>& circuits, const std::vector<CircuitLabel>& labels,
                                      const VerifyOptions& options) {
  std::vector<SuiteResult> out;
  out.push_back(suite_round_trip(circuits));
  out.push_back(suite_dedup(circuits));
  out.push_back(suite_unitary(circuits, labels));
  out.push_back(suite_blob(circuits, options.blob));
  out.push_back(suite_traces(circuits, options));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Loaded {
  std::vector<Circuit> circuits;
  std::vector<CircuitLabel> labels;
};

Loaded load_circuits(const ExperimentConfig& cfg) {
  if (cfg.spec) {
    CircuitBatch b = generate(*cfg.spec);
    return Loaded{std::move(b.circuits), std::move(b.labels)};
  }
  if (cfg.batch.empty()) throw ConfigError("no batch given: pass a batch directory or a spec");
  LoadedBatch b = read_batch(cfg.batch);
  return Loaded{std::move(b.circuits), std::move(b.labels)};
}

void require_out(const ExperimentConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("an output directory is required");
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw IoError("cannot create " + cfg.out.string() + ": " + ec.message());
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  write_file(p, std::string(bytes.begin(), bytes.end()));
}

template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace

int cmd_generate(const ExperimentConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    if (!config.spec) throw ConfigError("generate needs a batch spec (--config or --preset)");
    validate(*config.spec);
    require_out(config);
    const CircuitBatch batch = generate(*config.spec);
    write_batch(batch, config.out);
    log << "generated " << batch.circuits.size() << " circuits into " << config.out.string() << " (batch "
        << batch_hash(batch.circuits) << ")\n";
    return kExitOk;
  });
}

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    require_out(config);
    ExperimentOptions eo;
    eo.seed = config.seed;
    eo.shots = config.shots;
    eo.timing.reset_ns = config.reset_ns;
    eo.socket = config.socket;
    const Experiment ex = run_experiment([&] { return load_circuits(config).circuits; }, config.mode, eo);

    const fs::path trace_dir = config.out / "traces";
    const fs::path prog_dir = config.out / "programs";
    fs::create_directories(trace_dir);
    fs::create_directories(prog_dir);
    std::vector<std::string> files;
    char name[32];
    for (std::size_t i = 0; i < ex.traces.size(); ++i) {
      std::snprintf(name, sizeof name, "c%05zu.trace", i);
      write_file(trace_dir / name, format_trace(ex.traces[i]));
      files.push_back(std::string("traces/") + name);
    }
    for (const auto& [i, p] : ex.programs) {
      std::snprintf(name, sizeof name, "p%05u.pcem", i);
      write_bytes(prog_dir / name, write_machine_file(p));
      files.push_back(std::string("programs/") + name);
    }
    if (config.mode == Mode::Pce) {
      write_bytes(config.out / "params.blob", ex.blob);
      files.push_back("params.blob");
    }

    json shots = json::object();
    shots["format"] = "pce-shots";
    shots["circuits"] = json::array();
    std::uint64_t cycles = 0, timeline = 0, requests = 0;
    for (std::size_t i = 0; i < ex.run.runs.size(); ++i) {
      const CircuitRun& r = ex.run.runs[i];
      shots["circuits"].push_back({{"index", i},
                                   {"qubits", r.data.qubits},
                                   {"shots", r.data.bits.size()},
                                   {"counts", ex.counts[i]}});
      cycles += r.cycle_count;
      timeline += r.timeline_ns;
      requests += r.stitch_requests;
    }
    write_file(config.out / "shots.json", shots.dump(1) + "\n");
    files.push_back("shots.json");

    const ProfileRecord& p = ex.profile;
    json summary = {{"format", "pce-summary"},
                    {"mode", mode_name(config.mode)},
                    {"batch_hash", ex.batch_hash},
                    {"n_circuits", ex.circuit_count},
                    {"groups", ex.group_count},
                    {"seed", config.seed},
                    {"shots", config.shots},
                    {"reset_ns", config.reset_ns},
                    {"load_circuit_calls", ex.run.load_circuit_calls},
                    {"load_params_calls", ex.run.load_params_calls},
                    {"compile_iterations", p.iterations(Stage::Compile)},
                    {"assemble_iterations", p.iterations(Stage::Assemble)},
                    {"stitch_requests", requests},
                    {"cycle_count", cycles},
                    {"simulated_start_run_ns", cycles * eo.timing.ns_per_cycle + timeline}};
    write_file(config.out / "summary.json", summary.dump(1) + "\n");
    files.push_back("summary.json");
    write_file(config.out / "profile.json", report(p));

    json manifest = {{"format", "pce-run"}, {"mode", mode_name(config.mode)}, {"batch_hash", ex.batch_hash}};
    json entries = json::array();
    for (const auto& f : files) {
      const std::string body = read_file(config.out / f);
      const std::uint32_t crc =
          crc32(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
      entries.push_back({{"file", f}, {"crc32", hex32(crc)}});
    }
    manifest["files"] = std::move(entries);
    write_file(config.out / "run_manifest.json", manifest.dump(1) + "\n");

    log << mode_name(config.mode) << " run: " << ex.circuit_count << " circuits, " << ex.group_count << " groups, "
        << ex.run.load_circuit_calls << " circuit loads, " << requests << " stitch requests\n";
    return kExitOk;
  });
}

int cmd_verify(const ExperimentConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    const Loaded l = load_circuits(config);
    VerifyOptions vo;
    vo.seed = config.seed;
    vo.shots = config.shots;
    vo.timing.reset_ns = config.reset_ns;
    if (!config.blob.empty()) {
      const std::string b = read_file(config.blob);
      vo.blob = std::vector<std::uint8_t>(b.begin(), b.end());
    }
    const auto results = verify_batch(l.circuits, l.labels, vo);
    bool ok = true;
    json doc = {{"format", "pce-verify"}, {"n_circuits", l.circuits.size()}};
    json suites = json::array();
    for (const auto& s : results) {
      ok = ok && s.passed;
      log << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.checked << " checked)";
      if (!s.passed) log << ": " << s.counterexample;
      log << "\n";
      suites.push_back({{"suite", s.name}, {"passed", s.passed}, {"checked", s.checked}, {"counterexample", s.counterexample}});
    }
    doc["suites"] = std::move(suites);
    doc["passed"] = ok;
    if (!config.out.empty()) {
      require_out(config);
      write_file(config.out / "verify.json", doc.dump(1) + "\n");
    }
    return ok ? kExitOk : kExitVerifyFailed;
  });
}

int cmd_compare(const fs::path& baseline_report, const fs::path& pce_report, const fs::path& out, std::ostream& log) {
  return guarded(log, [&] {
    const ProfileRecord a = parse_report(read_file(baseline_report));
    const ProfileRecord b = parse_report(read_file(pce_report));
    const SpeedupTable t = compare(a, b);
    const std::string doc = report(t);
    if (out.empty()) {
      log << doc;
    } else {
      write_file(out, doc);
    }
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %14s %14s %9s %10s %10s\n", "stage", "baseline ns", "pce ns", "ratio",
                  "base it.", "pce it.");
    log << line;
    for (const auto& c : t.stages) {
      std::snprintf(line, sizeof line, "%-18s %14llu %14llu %9s %10llu %10llu\n", stage_name(c.stage),
                    static_cast<unsigned long long>(c.baseline.duration_ns),
                    static_cast<unsigned long long>(c.pce.duration_ns),
                    c.ratio ? std::to_string(*c.ratio).substr(0, 8).c_str() : "n/a",
                    static_cast<unsigned long long>(c.baseline.iterations),
                    static_cast<unsigned long long>(c.pce.iterations));
      log << line;
    }
    std::snprintf(line, sizeof line, "classical time: %.1f%% -> %.1f%% of total, reduction %.1f%%\n",
                  t.baseline_classical_pct, t.pce_classical_pct, t.classical_reduction_pct);
    log << line;
    return kExitOk;
  });
}

}  // namespace pce
