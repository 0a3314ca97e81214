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

#include "pce/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "pce/errors.hpp"
#include "pce/rng.hpp"

namespace pce {

namespace {

constexpr double kCliffordTol = 1e-9;

UnitaryMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return UnitaryMatrix(2, {h, h, h, -h});
}

UnitaryMatrix s_gate() { return UnitaryMatrix(2, {1.0, 0.0, 0.0, Complex{0.0, 1.0}}); }

// Pauli X^x Z^z (phase irrelevant).
UnitaryMatrix pauli_matrix(bool x, bool z) {
  UnitaryMatrix m = UnitaryMatrix::identity(2);
  if (z) m = UnitaryMatrix(2, {1.0, 0.0, 0.0, -1.0});
  if (x) m = UnitaryMatrix(2, {0.0, 1.0, 1.0, 0.0}) * m;
  return m;
}

void append_u3(Circuit& c, const U3Params& p, QubitId q) {
  const auto gates = u3_decompose(p, q);
  c.gates.insert(c.gates.end(), gates.begin(), gates.end());
}

void append_measures(Circuit& c, const Width& width) {
  for (QubitId q : width) c.gates.push_back(Gate::measure(q));
}

void append_cz_chain(Circuit& c, const Width& width) {
  for (std::size_t i = 0; i + 1 < width.size(); i += 2) c.gates.push_back(Gate::cz(width[i], width[i + 1]));
}

std::uint64_t kind_tag(BatchKind kind) { return static_cast<std::uint64_t>(kind) + 1; }

}  // namespace

// ---------------------------------------------------------------------------
// Clifford table

CliffordTable::CliffordTable() {
  std::vector<UnitaryMatrix> found;
  std::deque<UnitaryMatrix> frontier{UnitaryMatrix::identity(2)};
  const UnitaryMatrix gens[] = {hadamard(), s_gate()};
  while (!frontier.empty() && found.size() < kSize) {
    UnitaryMatrix m = std::move(frontier.front());
    frontier.pop_front();
    const bool seen = std::any_of(found.begin(), found.end(),
                                  [&](const UnitaryMatrix& f) { return equal_up_to_global_phase(f, m, kCliffordTol); });
    if (seen) continue;
    for (const UnitaryMatrix& g : gens) frontier.push_back(g * m);
    found.push_back(std::move(m));
  }
  if (found.size() != kSize) throw DomainError("Clifford enumeration did not close at 24 elements");
  for (std::size_t i = 0; i < kSize; ++i) {
    params_[i] = u3_from_unitary(found[i]);
    matrices_[i] = u3_matrix(params_[i]);
  }
}

std::size_t CliffordTable::find(const UnitaryMatrix& u) const {
  for (std::size_t i = 0; i < kSize; ++i) {
    if (equal_up_to_global_phase(matrices_[i], u, kCliffordTol)) return i;
  }
  throw DomainError("matrix is not a single-qubit Clifford");
}

std::size_t CliffordTable::compose(std::size_t first, std::size_t later) const {
  return find(matrices_.at(later) * matrices_.at(first));
}

const CliffordTable& clifford_table() {
  static const CliffordTable table;
  return table;
}

// ---------------------------------------------------------------------------
// Batch spec

const char* batch_kind_name(BatchKind kind) {
  switch (kind) {
    case BatchKind::RB: return "RB";
    case BatchKind::RC: return "RC";
    case BatchKind::FRC: return "FRC";
    case BatchKind::CB: return "CB";
  }
  return "?";
}

BatchKind parse_batch_kind(const std::string& name) {
  if (name == "RB" || name == "rb") return BatchKind::RB;
  if (name == "RC" || name == "rc") return BatchKind::RC;
  if (name == "FRC" || name == "frc") return BatchKind::FRC;
  if (name == "CB" || name == "cb") return BatchKind::CB;
  throw ConfigError("unknown batch kind '" + name + "' (expected RB, RC, FRC or CB)");
}

const std::vector<std::uint32_t>& BatchSpec::depths_for(std::size_t width_index) const {
  return depths.size() == 1 ? depths.front() : depths.at(width_index);
}

std::uint32_t BatchSpec::circuits_for(std::size_t width_index) const {
  return circuits_per_depth.empty() ? randomizations : circuits_per_depth.at(width_index);
}

std::uint16_t register_size(const Width& width) {
  std::uint16_t n = 0;
  for (QubitId q : width) n = std::max<std::uint16_t>(n, q.index + 1);
  return n;
}

void validate(const BatchSpec& spec) {
  if (spec.widths.empty()) throw ConfigError("batch spec: widths must be non-empty");
  if (spec.depths.empty()) throw ConfigError("batch spec: depths must be non-empty");
  if (spec.depths.size() != 1 && spec.depths.size() != spec.widths.size()) {
    throw ConfigError("batch spec: give one depth list, or one per width");
  }
  for (std::size_t wi = 0; wi < spec.widths.size(); ++wi) {
    const Width& w = spec.widths[wi];
    if (w.empty()) throw ConfigError("batch spec: width " + std::to_string(wi) + " is empty");
    std::set<QubitId> uniq(w.begin(), w.end());
    if (uniq.size() != w.size()) throw ConfigError("batch spec: width " + std::to_string(wi) + " repeats a qubit");
    for (QubitId q : w) {
      if (q.index >= 8) throw ConfigError("batch spec: qubit " + std::to_string(q.index) + " >= 8");
    }
    if (spec.kind == BatchKind::CB && w.size() % 2 != 0) {
      throw ConfigError("batch spec: CB width " + std::to_string(wi) + " has odd size " + std::to_string(w.size()));
    }
    const auto& ds = spec.depths_for(wi);
    if (ds.empty()) throw ConfigError("batch spec: depth list for width " + std::to_string(wi) + " is empty");
    for (auto d : ds) {
      if (d == 0) throw ConfigError("batch spec: depths must be positive");
    }
  }
  if (spec.randomizations == 0) throw ConfigError("batch spec: randomizations must be positive");
  if (spec.shots == 0) throw ConfigError("batch spec: shots must be positive");
  if (!spec.circuits_per_depth.empty()) {
    if (spec.circuits_per_depth.size() != spec.widths.size()) {
      throw ConfigError("batch spec: circuits_per_depth needs one entry per width");
    }
    for (auto n : spec.circuits_per_depth) {
      if (n == 0) throw ConfigError("batch spec: circuits_per_depth entries must be positive");
    }
  }
}

// ---------------------------------------------------------------------------
// RB

std::array<Circuit, 2> gen_read_circuits(const Width& width, std::uint32_t shots) {
  const U3Params identity{Phase{0.0}, Phase{0.0}, Phase{0.0}};
  const U3Params flip{Phase{0.0}, Phase{kPi}, Phase{0.0}};
  std::array<Circuit, 2> out;
  for (int k = 0; k < 2; ++k) {
    Circuit& c = out[k];
    c.n_qubits = register_size(width);
    c.shots = shots;
    for (QubitId q : width) append_u3(c, k == 0 ? identity : flip, q);
    append_measures(c, width);
  }
  return out;
}

CircuitBatch gen_rb(const BatchSpec& spec) {
  if (spec.kind != BatchKind::RB) throw ConfigError("gen_rb: spec kind is not RB");
  validate(spec);
  const CliffordTable& table = clifford_table();
  CircuitBatch batch{.circuits = {}, .spec = spec, .labels = {}};
  for (std::size_t wi = 0; wi < spec.widths.size(); ++wi) {
    const Width& width = spec.widths[wi];
    const auto& depths = spec.depths_for(wi);
    for (std::size_t di = 0; di < depths.size(); ++di) {
      const std::uint32_t m = depths[di];
      for (std::uint32_t r = 0; r < spec.randomizations; ++r) {
        Rng rng(derive_seed(spec.seed, {kind_tag(BatchKind::RB), wi, di, r}));
        // sequence[q][k]: Clifford index of layer k on width slot q.
        std::vector<std::vector<U3Params>> layers(width.size());
        for (std::size_t qi = 0; qi < width.size(); ++qi) {
          UnitaryMatrix net = UnitaryMatrix::identity(2);
          layers[qi].reserve(m + 1);
          for (std::uint32_t k = 0; k < m; ++k) {
            const U3Params& p = table.params(rng.below(CliffordTable::kSize));
            layers[qi].push_back(p);
            net = u3_matrix(p) * net;
          }
          layers[qi].push_back(u3_from_unitary(net.adjoint()));
        }
        Circuit c;
        c.n_qubits = register_size(width);
        c.shots = spec.shots;
        c.gates.reserve(width.size() * (5 * (m + 1) + 1));
        for (std::uint32_t k = 0; k <= m; ++k) {
          for (std::size_t qi = 0; qi < width.size(); ++qi) append_u3(c, layers[qi][k], width[qi]);
        }
        append_measures(c, width);
        batch.circuits.push_back(std::move(c));
        batch.labels.push_back({static_cast<std::uint32_t>(wi), m, r, "rb"});
      }
    }
    auto reads = gen_read_circuits(width, spec.shots);
    batch.circuits.push_back(std::move(reads[0]));
    batch.labels.push_back({static_cast<std::uint32_t>(wi), 0, 0, "read0"});
    batch.circuits.push_back(std::move(reads[1]));
    batch.labels.push_back({static_cast<std::uint32_t>(wi), 0, 1, "read1"});
  }
  return batch;
}

// ---------------------------------------------------------------------------
// CB

namespace {

const std::array<U3Params, 4>& pauli_params() {
  static const std::array<U3Params, 4> table = [] {
    std::array<U3Params, 4> t{};
    for (int i = 0; i < 4; ++i) t[i] = u3_from_unitary(pauli_matrix(i & 1, i & 2));
    return t;
  }();
  return table;
}

}  // namespace

CircuitBatch gen_cb(const BatchSpec& spec) {
  if (spec.kind != BatchKind::CB) throw ConfigError("gen_cb: spec kind is not CB");
  validate(spec);
  const CliffordTable& table = clifford_table();
  const auto& paulis = pauli_params();
  CircuitBatch batch{.circuits = {}, .spec = spec, .labels = {}};
  for (std::size_t wi = 0; wi < spec.widths.size(); ++wi) {
    const Width& width = spec.widths[wi];
    const auto& depths = spec.depths_for(wi);
    const std::uint32_t count = spec.circuits_for(wi);
    for (std::size_t di = 0; di < depths.size(); ++di) {
      const std::uint32_t m = depths[di];
      for (std::uint32_t r = 0; r < count; ++r) {
        Rng rng(derive_seed(spec.seed, {kind_tag(BatchKind::CB), wi, di, r}));
        Circuit c;
        c.n_qubits = register_size(width);
        c.shots = spec.shots;
        c.gates.reserve(width.size() * 5 * (m + 2) + width.size() / 2 * m + width.size());
        // Basis preparation: a random Clifford sends |0⟩ to a random Pauli eigenstate.
        std::vector<std::size_t> prep(width.size());
        for (std::size_t qi = 0; qi < width.size(); ++qi) {
          prep[qi] = rng.below(CliffordTable::kSize);
          append_u3(c, table.params(prep[qi]), width[qi]);
        }
        for (std::uint32_t k = 0; k < m; ++k) {
          for (std::size_t qi = 0; qi < width.size(); ++qi) append_u3(c, paulis[rng.below(4)], width[qi]);
          append_cz_chain(c, width);
        }
        // Closing cycle: a final random Pauli followed by the inverse basis change.
        for (std::size_t qi = 0; qi < width.size(); ++qi) {
          const std::uint32_t p = rng.below(4);
          const UnitaryMatrix closing = table.matrix(prep[qi]).adjoint() * pauli_matrix(p & 1, p & 2);
          append_u3(c, u3_from_unitary(closing), width[qi]);
        }
        append_measures(c, width);
        batch.circuits.push_back(std::move(c));
        batch.labels.push_back({static_cast<std::uint32_t>(wi), m, r, "cb"});
      }
    }
  }
  return batch;
}

// ---------------------------------------------------------------------------
// RC

namespace {

struct Layering {
  std::vector<QubitId> active;                     // sorted qubits touched by the base
  std::vector<std::vector<UnitaryMatrix>> single;  // [layer][active slot]
  std::vector<std::vector<Gate>> two_qubit;        // [cycle], size = single.size() - 1
  std::vector<Gate> measures;
};

Layering split_layers(const Circuit& base) {
  try {
    validate(base);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("gen_rc: ") + e.what());
  }
  Layering out;
  std::vector<bool> touched(base.n_qubits, false);
  std::size_t end = base.gates.size();
  while (end > 0 && base.gates[end - 1].kind == GateKind::Measure) --end;
  for (std::size_t i = end; i < base.gates.size(); ++i) out.measures.push_back(base.gates[i]);
  for (std::size_t i = 0; i < base.gates.size(); ++i) {
    const Gate& g = base.gates[i];
    if (i < end && g.kind == GateKind::Measure) {
      throw ConfigError("gen_rc: Measure at gate " + std::to_string(i) + " is not in the trailing block");
    }
    touched[g.q0.index] = true;
    if (g.kind == GateKind::TwoQubit) touched[g.q1.index] = true;
  }
  std::vector<int> slot(base.n_qubits, -1);
  for (std::uint16_t q = 0; q < base.n_qubits; ++q) {
    if (touched[q]) {
      slot[q] = static_cast<int>(out.active.size());
      out.active.push_back(QubitId{q});
    }
  }
  const auto fresh_layer = [&] {
    return std::vector<UnitaryMatrix>(out.active.size(), UnitaryMatrix::identity(2));
  };
  out.single.push_back(fresh_layer());
  bool in_two_qubit = false;
  std::vector<bool> busy(base.n_qubits, false);
  const UnitaryMatrix x90 = x90_matrix();
  for (std::size_t i = 0; i < end; ++i) {
    const Gate& g = base.gates[i];
    switch (g.kind) {
      case GateKind::X90:
      case GateKind::VirtualZ: {
        if (in_two_qubit) {
          out.single.push_back(fresh_layer());
          in_two_qubit = false;
        }
        UnitaryMatrix& u = out.single.back()[static_cast<std::size_t>(slot[g.q0.index])];
        u = (g.kind == GateKind::X90 ? x90 : z_matrix(g.phase)) * u;
        break;
      }
      case GateKind::TwoQubit: {
        if (g.label.view() != "CZ") {
          throw ConfigError("gen_rc: only CZ layers can be twirled, found '" + std::string(g.label.view()) + "'");
        }
        if (!in_two_qubit) {
          out.two_qubit.emplace_back();
          std::fill(busy.begin(), busy.end(), false);
          in_two_qubit = true;
        }
        if (busy[g.q0.index] || busy[g.q1.index]) {
          throw ConfigError("gen_rc: gate " + std::to_string(i) + " reuses a qubit inside one two-qubit layer");
        }
        busy[g.q0.index] = busy[g.q1.index] = true;
        out.two_qubit.back().push_back(g);
        break;
      }
      default:
        throw ConfigError(std::string("gen_rc: ") + gate_kind_name(g.kind) + " cannot appear in a layered base");
    }
  }
  if (in_two_qubit) out.single.push_back(fresh_layer());
  return out;
}

struct PauliBits {
  bool x = false;
  bool z = false;
};

}  // namespace

CircuitBatch gen_rc(const Circuit& base, std::uint32_t n_rand, std::uint64_t seed, RcOptions opts) {
  if (n_rand == 0) throw ConfigError("gen_rc: n_rand must be >= 1");
  const Layering lay = split_layers(base);
  const std::size_t n_active = lay.active.size();
  std::vector<int> slot(base.n_qubits, -1);
  for (std::size_t i = 0; i < n_active; ++i) slot[lay.active[i].index] = static_cast<int>(i);

  CircuitBatch batch;
  batch.spec.kind = BatchKind::RC;
  batch.spec.randomizations = n_rand;
  batch.spec.shots = base.shots;
  batch.spec.seed = seed;
  batch.spec.widths = {lay.active};
  batch.spec.depths = {{static_cast<std::uint32_t>(lay.two_qubit.size())}};

  const std::size_t cycles = lay.two_qubit.size();
  for (std::uint32_t r = 0; r < n_rand; ++r) {
    Rng rng(derive_seed(seed, {r}));
    // twirl[k]: Pauli inserted before cycle k; correction[k]: the same Pauli
    // conjugated through cycle k, applied right after it.
    std::vector<std::vector<PauliBits>> twirl(cycles, std::vector<PauliBits>(n_active));
    std::vector<std::vector<PauliBits>> correction = twirl;
    for (std::size_t k = 0; k < cycles; ++k) {
      for (std::size_t s = 0; s < n_active; ++s) {
        if (!opts.force_identity) {
          const std::uint32_t p = rng.below(4);
          twirl[k][s] = PauliBits{(p & 1) != 0, (p & 2) != 0};
        }
      }
      correction[k] = twirl[k];
      for (const Gate& g : lay.two_qubit[k]) {
        const auto a = static_cast<std::size_t>(slot[g.q0.index]);
        const auto b = static_cast<std::size_t>(slot[g.q1.index]);
        correction[k][a].z ^= twirl[k][b].x;
        correction[k][b].z ^= twirl[k][a].x;
      }
    }
    Circuit c;
    c.n_qubits = base.n_qubits;
    c.shots = base.shots;
    c.gates.reserve(lay.single.size() * n_active * 5 + base.gates.size());
    for (std::size_t j = 0; j < lay.single.size(); ++j) {
      for (std::size_t s = 0; s < n_active; ++s) {
        UnitaryMatrix u = lay.single[j][s];
        if (j > 0) u = u * pauli_matrix(correction[j - 1][s].x, correction[j - 1][s].z);
        if (j < cycles) u = pauli_matrix(twirl[j][s].x, twirl[j][s].z) * u;
        append_u3(c, u3_from_unitary(u), lay.active[s]);
      }
      if (j < cycles) c.gates.insert(c.gates.end(), lay.two_qubit[j].begin(), lay.two_qubit[j].end());
    }
    c.gates.insert(c.gates.end(), lay.measures.begin(), lay.measures.end());
    batch.circuits.push_back(std::move(c));
    batch.labels.push_back({0, static_cast<std::uint32_t>(cycles), r, "rc"});
  }
  return batch;
}

Circuit random_layered_circuit(const Width& width, std::uint32_t depth, std::uint64_t seed, std::uint32_t shots) {
  Rng rng(seed);
  Circuit c;
  c.n_qubits = register_size(width);
  c.shots = shots;
  for (std::uint32_t j = 0; j <= depth; ++j) {
    for (QubitId q : width) {
      const U3Params p{Phase{kTwoPi * rng.uniform()}, Phase{kPi * rng.uniform()}, Phase{kTwoPi * rng.uniform()}};
      append_u3(c, p, q);
    }
    if (j < depth) append_cz_chain(c, width);
  }
  append_measures(c, width);
  return c;
}

CircuitBatch gen_rc_batch(const BatchSpec& spec) {
  if (spec.kind != BatchKind::RC && spec.kind != BatchKind::FRC) {
    throw ConfigError("gen_rc_batch: spec kind is not RC/FRC");
  }
  validate(spec);
  CircuitBatch batch{.circuits = {}, .spec = spec, .labels = {}};
  for (std::size_t wi = 0; wi < spec.widths.size(); ++wi) {
    const auto& depths = spec.depths_for(wi);
    for (std::size_t di = 0; di < depths.size(); ++di) {
      const Circuit base = random_layered_circuit(spec.widths[wi], depths[di],
                                                  derive_seed(spec.seed, {kind_tag(spec.kind), wi, di, 0}), spec.shots);
      CircuitBatch rc = gen_rc(base, spec.randomizations, derive_seed(spec.seed, {kind_tag(spec.kind), wi, di, 1}));
      for (std::size_t r = 0; r < rc.circuits.size(); ++r) {
        batch.circuits.push_back(std::move(rc.circuits[r]));
        batch.labels.push_back({static_cast<std::uint32_t>(wi), depths[di], static_cast<std::uint32_t>(r), "rc"});
      }
    }
  }
  return batch;
}

CircuitBatch generate(const BatchSpec& spec) {
  switch (spec.kind) {
    case BatchKind::RB: return gen_rb(spec);
    case BatchKind::CB: return gen_cb(spec);
    case BatchKind::RC:
    case BatchKind::FRC: return gen_rc_batch(spec);
  }
  throw ConfigError("unknown batch kind");
}

// ---------------------------------------------------------------------------
// Reference configurations

namespace {

Width prefix_width(std::uint16_t n) {
  Width w;
  for (std::uint16_t q = 0; q < n; ++q) w.push_back(QubitId{q});
  return w;
}

BatchSpec rc_grid(BatchKind kind, std::uint32_t randomizations, std::uint32_t shots, std::uint64_t seed) {
  BatchSpec s;
  s.kind = kind;
  for (std::uint16_t n = 2; n <= 8; ++n) s.widths.push_back(prefix_width(n));
  s.depths = {{1, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}};
  s.randomizations = randomizations;
  s.shots = shots;
  s.seed = seed;
  return s;
}

}  // namespace

BatchSpec preset_rc20(std::uint64_t seed) { return rc_grid(BatchKind::RC, 20, 50, seed); }

BatchSpec preset_frc(std::uint64_t seed) { return rc_grid(BatchKind::FRC, 1000, 1, seed); }

BatchSpec preset_cb(std::uint64_t seed) {
  BatchSpec s;
  s.kind = BatchKind::CB;
  s.widths = {prefix_width(2), prefix_width(4), prefix_width(6), prefix_width(8)};
  s.depths = {{4, 16, 64}, {4, 8, 32}, {2, 4, 8}, {2, 4, 8}};
  s.circuits_per_depth = {180, 220, 320, 360};
  s.randomizations = 1;
  s.shots = 100;
  s.seed = seed;
  return s;
}

BatchSpec preset_rb(std::uint64_t seed) {
  BatchSpec s;
  s.kind = BatchKind::RB;
  for (std::uint16_t n = 1; n <= 8; ++n) s.widths.push_back(prefix_width(n));
  s.depths = {{16, 128, 384}, {16, 96, 384}, {16, 64, 256}, {16, 64, 192},
              {8, 64, 192},   {8, 32, 160},  {4, 32, 160},  {4, 32, 128}};
  s.randomizations = 30;
  s.shots = 100;
  s.seed = seed;
  return s;
}

}  // namespace pce
