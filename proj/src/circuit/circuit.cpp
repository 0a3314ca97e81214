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

#include "pce/circuit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pce/errors.hpp"

namespace pce {

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::X90: return "X90";
    case GateKind::VirtualZ: return "VZ";
    case GateKind::TwoQubit: return "TWO_QUBIT";
    case GateKind::Measure: return "MEAS";
    case GateKind::Delay: return "DELAY";
    case GateKind::ParamRequest: return "PREQ";
  }
  return "?";
}

GateLabel::GateLabel(std::string_view name) {
  if (name.empty() || name.size() > kCapacity) {
    throw ValidationError("two-qubit gate name must be 1-" + std::to_string(kCapacity) +
                          " characters: '" + std::string(name) + "'");
  }
  std::copy(name.begin(), name.end(), chars_.begin());
  size_ = static_cast<std::uint8_t>(name.size());
}

namespace {

Gate make(GateKind kind, QubitId q) {
  Gate g;
  g.kind = kind;
  g.q0 = q;
  return g;
}

}  // namespace

Gate Gate::x90(QubitId q) { return make(GateKind::X90, q); }

Gate Gate::vz(QubitId q, Phase p) {
  Gate g = make(GateKind::VirtualZ, q);
  g.phase = p;
  return g;
}

Gate Gate::cz(QubitId a, QubitId b) { return two_qubit("CZ", a, b); }

Gate Gate::two_qubit(std::string_view name, QubitId a, QubitId b) {
  Gate g = make(GateKind::TwoQubit, a);
  g.q1 = b;
  g.label = GateLabel(name);
  return g;
}

Gate Gate::measure(QubitId q) { return make(GateKind::Measure, q); }

Gate Gate::delay(QubitId q, std::uint32_t ns) {
  Gate g = make(GateKind::Delay, q);
  g.duration_ns = ns;
  return g;
}

Gate Gate::param_request(QubitId q) { return make(GateKind::ParamRequest, q); }

void validate(const Circuit& c) {
  if (c.n_qubits == 0) {
    throw ValidationError("circuit must declare at least one qubit");
  }
  if (c.shots == 0) {
    throw ValidationError("circuit shots must be positive");
  }
  std::vector<bool> measured(c.n_qubits, false);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const auto where = [&] { return "gate " + std::to_string(i) + " (" + gate_kind_name(g.kind) + ")"; };
    if (g.q0.index >= c.n_qubits || (g.kind == GateKind::TwoQubit && g.q1.index >= c.n_qubits)) {
      throw ValidationError(where() + ": qubit out of range for " + std::to_string(c.n_qubits) +
                            "-qubit circuit");
    }
    if (g.kind == GateKind::TwoQubit) {
      if (g.q0 == g.q1) {
        throw ValidationError(where() + ": two-qubit gate needs distinct qubits");
      }
      if (g.label.empty()) {
        throw ValidationError(where() + ": two-qubit gate without a name");
      }
    }
    if (g.kind != GateKind::VirtualZ && g.phase.radians != 0.0) {
      throw ValidationError(where() + ": phase set on a non-VirtualZ gate");
    }
    if (g.kind == GateKind::VirtualZ && !std::isfinite(g.phase.radians)) {
      throw ValidationError(where() + ": non-finite phase");
    }
    for (int k = 0; k < g.arity(); ++k) {
      const QubitId q = k == 0 ? g.q0 : g.q1;
      if (measured[q.index]) {
        throw ValidationError(where() + ": gate after Measure on q" + std::to_string(q.index));
      }
    }
    if (g.kind == GateKind::Measure) {
      measured[g.q0.index] = true;
    }
  }
}

Circuit strip_measurements(const Circuit& c) {
  Circuit out{.gates = {}, .n_qubits = c.n_qubits, .shots = c.shots};
  out.gates.reserve(c.gates.size());
  for (const Gate& g : c.gates) {
    if (g.kind != GateKind::Measure) {
      out.gates.push_back(g);
    }
  }
  return out;
}

std::string to_text(const Circuit& c) {
  std::string out;
  out.reserve(16 * c.gates.size() + 32);
  out += "qubits " + std::to_string(c.n_qubits) + " shots " + std::to_string(c.shots) + "\n";
  char buf[64];
  for (const Gate& g : c.gates) {
    const std::string q = "q" + std::to_string(g.q0.index);
    switch (g.kind) {
      case GateKind::X90: out += "X90 " + q + "\n"; break;
      case GateKind::VirtualZ:
        std::snprintf(buf, sizeof(buf), "%.17g", g.phase.radians);
        out += "VZ " + q + " " + buf + "\n";
        break;
      case GateKind::TwoQubit:
        out += std::string(g.label.view()) + " " + q + " q" + std::to_string(g.q1.index) + "\n";
        break;
      case GateKind::Measure: out += "MEAS " + q + "\n"; break;
      case GateKind::Delay: out += "DELAY " + q + " " + std::to_string(g.duration_ns) + "\n"; break;
      case GateKind::ParamRequest: out += "PREQ " + q + "\n"; break;
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_uint(std::string_view tok, std::size_t line_no, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + std::string(tok) + "'");
  }
  return value;
}

QubitId parse_qubit(std::string_view tok, std::size_t line_no) {
  if (tok.size() < 2 || tok[0] != 'q') {
    throw ParseError("line " + std::to_string(line_no) + ": expected q<i>, got '" + std::string(tok) + "'");
  }
  return QubitId{parse_uint<std::uint16_t>(tok.substr(1), line_no, "qubit index")};
}

double parse_double(std::string_view tok, std::size_t line_no) {
  const std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": bad phase '" + s + "'");
  }
  return v;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const auto need = [&](std::size_t n) {
      if (toks.size() != n) {
        throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(toks[0]) + "' takes " +
                         std::to_string(n - 1) + " operands");
      }
    };
    if (!have_header) {
      if (toks.size() != 4 || toks[0] != "qubits" || toks[2] != "shots") {
        throw ParseError("line " + std::to_string(line_no) + ": expected header 'qubits <n> shots <s>'");
      }
      c.n_qubits = parse_uint<std::uint16_t>(toks[1], line_no, "qubit count");
      c.shots = parse_uint<std::uint32_t>(toks[3], line_no, "shot count");
      have_header = true;
      continue;
    }
    const std::string_view op = toks[0];
    if (op == "X90") {
      need(2);
      c.gates.push_back(Gate::x90(parse_qubit(toks[1], line_no)));
    } else if (op == "VZ") {
      need(3);
      c.gates.push_back(Gate::vz(parse_qubit(toks[1], line_no), Phase{parse_double(toks[2], line_no)}));
    } else if (op == "MEAS") {
      need(2);
      c.gates.push_back(Gate::measure(parse_qubit(toks[1], line_no)));
    } else if (op == "DELAY") {
      need(3);
      c.gates.push_back(
          Gate::delay(parse_qubit(toks[1], line_no), parse_uint<std::uint32_t>(toks[2], line_no, "delay")));
    } else if (op == "PREQ") {
      need(2);
      c.gates.push_back(Gate::param_request(parse_qubit(toks[1], line_no)));
    } else if (op == "CZ") {
      need(3);
      c.gates.push_back(Gate::cz(parse_qubit(toks[1], line_no), parse_qubit(toks[2], line_no)));
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown gate '" + std::string(op) + "'");
    }
    if (eol == text.size()) break;
  }
  if (!have_header) {
    throw ParseError("missing header 'qubits <n> shots <s>'");
  }
  try {
    validate(c);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return c;
}

}  // namespace pce
