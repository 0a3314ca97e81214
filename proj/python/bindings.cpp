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

// Python bindings: circuits as text, batches, deduplication and experiment runs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pce/batch_io.hpp"
#include "pce/errors.hpp"
#include "pce/harness.hpp"
#include "pce/param_blob.hpp"
#include "pce/pulse_compiler.hpp"
#include "pce/rip.hpp"
#include "pce/unitary.hpp"

namespace py = pybind11;
using namespace pce;

namespace {

std::vector<Circuit> parse_all(const std::vector<std::string>& texts) {
  std::vector<Circuit> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_circuit(t));
  return out;
}

py::dict profile_dict(const ProfileRecord& p) {
  py::dict d;
  for (const auto& [stage, stats] : p.stages()) {
    py::dict s;
    s["duration_ns"] = stats.duration_ns;
    s["iterations"] = stats.iterations;
    d[stage_name(stage)] = s;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parameterized circuit execution core";

  py::register_exception<Error>(m, "PceError");

  m.def("quantize_phase", [](double r) { return quantize_phase(Phase{r}); });
  m.def("dequantize_phase", [](std::uint32_t w) { return dequantize_phase(w).radians; });

  m.def("u3_decompose", [](double theta, double phi, double lambda) {
    std::vector<std::pair<std::string, double>> out;
    for (const Gate& g : u3_decompose(U3Params{Phase{theta}, Phase{phi}, Phase{lambda}}, QubitId{0})) {
      out.emplace_back(gate_kind_name(g.kind), g.phase.radians);
    }
    return out;
  }, py::arg("theta"), py::arg("phi"), py::arg("lam"));

  m.def("normalize_circuit", [](const std::string& text) {
    const Circuit c = parse_circuit(text);
    validate(c);
    return to_text(c);
  }, "Parse, validate and re-serialize a circuit in the text format.");

  m.def("generate", [](const std::string& preset, std::uint64_t seed) {
    std::vector<std::string> out;
    for (const Circuit& c : generate(preset_spec(preset, seed)).circuits) out.push_back(to_text(c));
    return out;
  }, py::arg("preset"), py::arg("seed") = 2024, "Generate a preset batch as circuit texts.");

  m.def("generate_spec", [](const std::string& spec_json) {
    std::vector<std::string> out;
    for (const Circuit& c : generate(spec_from_json(nlohmann::json::parse(spec_json))).circuits) {
      out.push_back(to_text(c));
    }
    return out;
  });

  m.def("identify", [](const std::vector<std::string>& texts) {
    return identify(parse_all(texts)).groups();
  }, "Partition circuits into structural-equivalence groups.");

  m.def("peel", [](const std::string& text) { return peel(parse_circuit(text)); });

  m.def("rip", [](const std::vector<std::string>& texts) {
    const RipResult r = rip(parse_all(texts));
    const auto blob = binarize(r.report, r.table);
    py::dict d;
    d["groups"] = r.report.groups();
    d["percent"] = r.report.structural_equivalency_percent();
    d["blob"] = py::bytes(reinterpret_cast<const char*>(blob.data()), blob.size());
    return d;
  });

  m.def("debinarize", [](const py::bytes& b) {
    const std::string s = b;
    const DecodedBlob d = debinarize(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    py::dict out;
    out["groups"] = d.report.groups();
    out["n_qubits"] = d.table.n_qubits;
    out["words"] = d.table.circuits;
    return out;
  });

  m.def("assemble", [](const std::string& text) {
    const auto bytes = write_machine_file(assemble(compile(parse_circuit(text))));
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }, "Compile and assemble a circuit into machine-file bytes.");

  m.def("disassemble", [](const py::bytes& b) {
    const std::string s = b;
    return format_assembly(disassemble(read_machine_file(
        std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()))));
  });

  m.def("run", [](const std::vector<std::string>& texts, const std::string& mode, std::uint64_t seed,
                  std::uint32_t shots) {
    ExperimentOptions eo;
    eo.seed = seed;
    eo.shots = shots;
    eo.keep_traces = false;
    Experiment e;
    {
      py::gil_scoped_release release;
      e = run_experiment(parse_all(texts), parse_mode(mode), eo);
    }
    py::dict d;
    d["mode"] = mode_name(e.mode);
    d["circuits"] = e.circuit_count;
    d["groups"] = e.group_count;
    d["counts"] = e.counts;
    d["profile"] = profile_dict(e.profile);
    return d;
  }, py::arg("circuits"), py::arg("mode") = "pce", py::arg("seed") = 0, py::arg("shots") = 0);

  m.def("cmd", [](const std::string& name, const std::string& preset, const std::string& out, const std::string& mode,
                  std::uint64_t seed, std::uint32_t shots) {
    ExperimentConfig cfg;
    cfg.spec = preset_spec(preset, seed);
    cfg.mode = parse_mode(mode);
    cfg.seed = seed;
    cfg.shots = shots;
    cfg.out = out;
    std::ostringstream log;
    int code = kExitUsage;
    {
      py::gil_scoped_release release;
      if (name == "generate") code = cmd_generate(cfg, log);
      else if (name == "run") code = cmd_run(cfg, log);
      else if (name == "verify") code = cmd_verify(cfg, log);
      else log << "unknown command " << name << "\n";
    }
    return std::make_pair(code, log.str());
  }, py::arg("name"), py::arg("preset"), py::arg("out") = "", py::arg("mode") = "pce", py::arg("seed") = 2024,
     py::arg("shots") = 0, "Run a CLI subcommand on a preset; returns (exit code, log).");
}
