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

#include <algorithm>
#include <random>

#include "pce/errors.hpp"
#include "pce/generators.hpp"
#include "pce/param_blob.hpp"
#include "pce/rip.hpp"

using namespace pce;

namespace {

Width prefix(std::uint16_t n) {
  Width w;
  for (std::uint16_t q = 0; q < n; ++q) w.push_back(QubitId{q});
  return w;
}

CircuitBatch rb_batch(std::vector<std::uint32_t> depths, std::uint32_t rands, std::uint64_t seed) {
  BatchSpec s;
  s.kind = BatchKind::RB;
  s.widths = {prefix(1), prefix(2)};
  s.depths = {std::move(depths)};
  s.randomizations = rands;
  s.shots = 3;
  s.seed = seed;
  return gen_rb(s);
}

// Naive partition: circuit i joins the first earlier group whose first member
// is structurally equal; groups ordered by first member.
std::vector<std::vector<std::uint32_t>> naive_groups(const std::vector<Circuit>& cs) {
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::uint32_t i = 0; i < cs.size(); ++i) {
    bool placed = false;
    for (auto& g : groups) {
      if (structural_equal(build_graph(cs[g.front()]), build_graph(cs[i]))) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i});
  }
  return groups;
}

std::vector<Circuit> distinct_structures(std::size_t n) {
  std::vector<Circuit> out;
  for (std::size_t i = 0; i < n; ++i) {
    Circuit c;
    c.n_qubits = 2;
    for (std::size_t k = 0; k <= i; ++k) c.gates.push_back(Gate::x90(QubitId{static_cast<std::uint16_t>(k % 2)}));
    c.gates.push_back(Gate::vz(QubitId{0}, Phase{0.1 * static_cast<double>(i)}));
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST(BuildGraph, EmptyCircuit) {
  Circuit c;
  c.n_qubits = 2;
  const StructuralGraph g = build_graph(c);
  ASSERT_EQ(g.roots.size(), 2u);
  EXPECT_TRUE(g.chains[0].empty());
  EXPECT_TRUE(g.chains[1].empty());
  EXPECT_EQ(g.node_count(), 0u);
}

TEST(BuildGraph, U3ChainOrder) {
  Circuit c;
  for (const Gate& gate : u3_decompose(U3Params{Phase{0.2}, Phase{0.4}, Phase{0.6}}, QubitId{0})) c.gates.push_back(gate);
  const StructuralGraph g = build_graph(c);
  ASSERT_EQ(g.chains[0].size(), 5u);
  const GateKind want[] = {GateKind::VirtualZ, GateKind::X90, GateKind::VirtualZ, GateKind::X90, GateKind::VirtualZ};
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(g.chains[0][k].kind, want[k]);
    EXPECT_EQ(g.chains[0][k].position, static_cast<std::uint32_t>(k));
  }
}

TEST(BuildGraph, PhasesIgnoredEverythingElseNot) {
  Circuit a;
  a.n_qubits = 2;
  a.gates = {Gate::vz(QubitId{0}, Phase{0.1}), Gate::cz(QubitId{0}, QubitId{1}), Gate::vz(QubitId{1}, Phase{2.0})};
  Circuit b = a;
  b.gates[0].phase = Phase{3.0};
  b.gates[2].phase = Phase{0.0};
  const StructuralGraph ga = build_graph(a), gb = build_graph(b);
  ASSERT_EQ(ga.chains.size(), gb.chains.size());
  for (std::size_t q = 0; q < ga.chains.size(); ++q) {
    ASSERT_EQ(ga.chains[q].size(), gb.chains[q].size());
    for (std::size_t k = 0; k < ga.chains[q].size(); ++k) EXPECT_EQ(ga.chains[q][k], gb.chains[q][k]);
  }
  EXPECT_TRUE(structural_equal(ga, gb));
  EXPECT_EQ(ga.fingerprint(), gb.fingerprint());

  Circuit swapped = a;
  swapped.gates[1] = Gate::cz(QubitId{1}, QubitId{0});
  EXPECT_FALSE(structural_equal(ga, build_graph(swapped)));
  Circuit delay1 = a, delay2 = a;
  delay1.gates.push_back(Gate::delay(QubitId{0}, 10));
  delay2.gates.push_back(Gate::delay(QubitId{0}, 20));
  EXPECT_FALSE(structural_equal(build_graph(delay1), build_graph(delay2)));
  Circuit reordered;
  reordered.n_qubits = 2;
  reordered.gates = {Gate::x90(QubitId{0}), Gate::x90(QubitId{1})};
  Circuit reordered2 = reordered;
  std::swap(reordered2.gates[0], reordered2.gates[1]);
  EXPECT_FALSE(structural_equal(build_graph(reordered), build_graph(reordered2)));
}

TEST(BuildGraph, OutOfRangeQubit) {
  Circuit c;
  c.n_qubits = 1;
  c.gates = {Gate::x90(QubitId{3})};
  EXPECT_THROW(build_graph(c), ValidationError);
}

TEST(StructuralEqual, RbCases) {
  const CircuitBatch b = rb_batch({4, 5}, 4, 1);
  const StructuralGraph g = build_graph(b.circuits[0]);
  EXPECT_TRUE(structural_equal(g, g));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_TRUE(structural_equal(g, build_graph(b.circuits[i])));
  EXPECT_FALSE(structural_equal(g, build_graph(b.circuits[4])));
  const CircuitBatch other_seed = rb_batch({4, 5}, 4, 2);
  EXPECT_TRUE(structural_equal(g, build_graph(other_seed.circuits[2])));
}

TEST(Identify, MatchesNaiveOracleOnShuffledBatches) {
  const CircuitBatch b = rb_batch({2, 3, 5}, 4, 8);
  std::mt19937_64 rng(77);
  for (int t = 0; t < 10; ++t) {
    std::vector<Circuit> cs = b.circuits;
    std::shuffle(cs.begin(), cs.end(), rng);
    const EquivalenceReport r = identify(cs);
    EXPECT_EQ(r.groups(), naive_groups(cs));
    EXPECT_EQ(r.circuit_count(), cs.size());
  }
}

TEST(Identify, DistinctStructuresAreSingletons) {
  const auto cs = distinct_structures(9);
  const EquivalenceReport r = identify(cs);
  EXPECT_EQ(r.group_count(), 9u);
  EXPECT_EQ(r.structural_equivalency_percent(), 0.0);
  EXPECT_EQ(naive_groups(cs).size(), 9u);
}

TEST(Identify, PresetGroupCounts) {
  const EquivalenceReport rc = identify(gen_rc_batch(preset_rc20()).circuits);
  EXPECT_EQ(rc.group_count(), 77u);
  EXPECT_NEAR(rc.structural_equivalency_percent(), 95.0, 1e-9);
  EXPECT_EQ(identify(gen_cb(preset_cb()).circuits).group_count(), 12u);
  const EquivalenceReport rb = identify(gen_rb(preset_rb()).circuits);
  EXPECT_EQ(rb.group_count(), 32u);
  EXPECT_NEAR(rb.structural_equivalency_percent(), 100.0 * (736 - 32) / 736.0, 1e-9);
}

TEST(EquivalenceReport, DerivedViews) {
  const EquivalenceReport r({{0, 2}, {1}, {3, 4, 5}});
  EXPECT_EQ(r.order(), (std::vector<std::uint32_t>{0, 2, 1, 3, 4, 5}));
  EXPECT_EQ(r.representatives(), (std::vector<std::uint32_t>{0, 1, 3}));
  EXPECT_EQ(r.group_of(), (std::vector<std::uint32_t>{0, 1, 0, 2, 2, 2}));
  EXPECT_EQ(r.unique_flags(), (std::vector<bool>{true, true, false, true, false, false}));
  EXPECT_NEAR(r.structural_equivalency_percent(), 50.0, 1e-12);
  EXPECT_THROW(EquivalenceReport({{0}, {0}}), ValidationError);
  EXPECT_THROW(EquivalenceReport({{0}, {}}), ValidationError);
  EXPECT_THROW(EquivalenceReport(std::vector<std::vector<std::uint32_t>>{{1}}), ValidationError);
}

TEST(Peel, EmptyAndRbCounts) {
  Circuit c;
  c.n_qubits = 2;
  c.gates = {Gate::x90(QubitId{0})};
  const QubitWords w = peel(c);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_TRUE(w[0].empty() && w[1].empty());
  BatchSpec s;
  s.kind = BatchKind::RB;
  s.widths = {prefix(1)};
  s.depths = {{7}};
  EXPECT_EQ(peel(gen_rb(s).circuits[0])[0].size(), 3u * 8u);
}

TEST(Peel, WordsMatchPhasesInOrder) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, kTwoPi);
  Circuit c;
  c.n_qubits = 3;
  std::vector<std::vector<double>> want(3);
  for (int i = 0; i < 300; ++i) {
    const auto q = static_cast<std::uint16_t>(rng() % 3);
    if (rng() % 2) {
      c.gates.push_back(Gate::x90(QubitId{q}));
    } else {
      const double p = d(rng);
      c.gates.push_back(Gate::vz(QubitId{q}, Phase{p}));
      want[q].push_back(p);
    }
  }
  const QubitWords w = peel(c);
  for (std::size_t q = 0; q < 3; ++q) {
    ASSERT_EQ(w[q].size(), want[q].size());
    for (std::size_t k = 0; k < w[q].size(); ++k) {
      double err = std::abs(dequantize_phase(w[q][k]).radians - want[q][k]);
      err = std::min(err, kTwoPi - err);
      ASSERT_LE(err, kQuantizationTolerance);
    }
  }
}

TEST(Peel, CapacityErrorNamesQubitAndCount) {
  Circuit c;
  c.n_qubits = 3;
  for (int i = 0; i < 2048; ++i) c.gates.push_back(Gate::vz(QubitId{1}, Phase{0.5}));
  EXPECT_NO_THROW(peel(c));
  c.gates.push_back(Gate::vz(QubitId{2}, Phase{0.5}));
  c.gates.push_back(Gate::vz(QubitId{1}, Phase{0.5}));
  try {
    peel(c);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.qubit(), 1u);
    EXPECT_EQ(e.count(), 2049u);
  }
  try {
    rip(std::vector<Circuit>{Circuit{}, c});
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.qubit(), 1u);
    EXPECT_NE(std::string(e.what()).find("circuit 1"), std::string::npos);
  }
}

TEST(Modify, ReplacesEveryVz) {
  const Circuit c = rb_batch({3}, 1, 4).circuits[1];
  const Circuit m = modify(c);
  std::size_t vz = 0, req = 0;
  for (const Gate& g : c.gates) vz += g.kind == GateKind::VirtualZ;
  for (const Gate& g : m.gates) {
    EXPECT_NE(g.kind, GateKind::VirtualZ);
    req += g.kind == GateKind::ParamRequest;
  }
  EXPECT_EQ(vz, req);
  const StructuralGraph a = build_graph(c), b = build_graph(m);
  for (std::size_t q = 0; q < a.chains.size(); ++q) {
    ASSERT_EQ(a.chains[q].size(), b.chains[q].size());
    for (std::size_t k = 0; k < a.chains[q].size(); ++k) {
      GraphNode x = a.chains[q][k], y = b.chains[q][k];
      if (x.kind == GateKind::VirtualZ) {
        EXPECT_EQ(y.kind, GateKind::ParamRequest);
        y.kind = GateKind::VirtualZ;
      }
      EXPECT_EQ(x, y);
    }
  }
  Circuit plain;
  plain.gates = {Gate::x90(QubitId{0}), Gate::measure(QubitId{0})};
  EXPECT_EQ(modify(plain), plain);
}

TEST(Restitch, InvertsModifyAndChecksCounts) {
  const Circuit c = rb_batch({6}, 1, 12).circuits[3];
  const Circuit back = restitch(modify(c), peel(c));
  ASSERT_EQ(back.gates.size(), c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    EXPECT_EQ(back.gates[i].kind, c.gates[i].kind);
    if (c.gates[i].kind == GateKind::VirtualZ) {
      EXPECT_EQ(quantize_phase(back.gates[i].phase), quantize_phase(c.gates[i].phase));
    }
  }
  QubitWords short_words = peel(c);
  short_words[0].pop_back();
  EXPECT_THROW(restitch(modify(c), short_words), ValidationError);
  QubitWords long_words = peel(c);
  long_words[1].push_back(0);
  EXPECT_THROW(restitch(modify(c), long_words), ValidationError);
}

TEST(Rip, SingletonAndRbUniques) {
  const std::vector<Circuit> one = {rb_batch({2}, 1, 1).circuits[0]};
  const RipResult r1 = rip(one);
  EXPECT_EQ(r1.uniques.size(), 1u);
  EXPECT_EQ(r1.report.order(), std::vector<std::uint32_t>{0});
  const RipResult rb = rip(gen_rb(preset_rb()).circuits);
  EXPECT_EQ(rb.uniques.size(), 32u);
  for (const Circuit& u : rb.uniques) {
    for (const Gate& g : u.gates) ASSERT_NE(g.kind, GateKind::VirtualZ);
  }
}

TEST(ParamBlob, EmptyBatchRoundTrip) {
  const RipResult r = rip(std::vector<Circuit>{});
  const auto blob = binarize(r.report, r.table);
  const DecodedBlob d = debinarize(blob);
  EXPECT_EQ(d.report.circuit_count(), 0u);
  EXPECT_EQ(d.table, r.table);
  EXPECT_EQ(binarize(d.report, d.table), blob);
}

TEST(ParamBlob, Rc20FixedPoint) {
  const RipResult r = rip(gen_rc_batch(preset_rc20()).circuits);
  const auto blob = binarize(r.report, r.table);
  const DecodedBlob d = debinarize(blob);
  EXPECT_TRUE(d.crc_ok);
  EXPECT_EQ(d.report, r.report);
  EXPECT_EQ(d.table, r.table);
  EXPECT_EQ(binarize(d.report, d.table), blob);
}

TEST(ParamBlob, CorruptionIsDecodeError) {
  const CircuitBatch b = rb_batch({2, 3}, 3, 6);
  const RipResult r = rip(b.circuits);
  const auto blob = binarize(r.report, r.table);
  auto bad_len = blob;
  bad_len[8] = 0xFF;
  bad_len[9] = 0xFF;
  EXPECT_THROW(debinarize(bad_len), DecodeError);
  auto bad_magic = blob;
  bad_magic[0] = 'X';
  try {
    debinarize(bad_magic);
    FAIL();
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
  for (std::size_t cut = 0; cut < blob.size(); cut += 7) {
    EXPECT_THROW(debinarize(std::span(blob).first(cut)), DecodeError) << cut;
  }
  auto flipped = blob;
  flipped[flipped.size() - 10] ^= 0x01;
  EXPECT_THROW(debinarize(flipped), DecodeError);
  EXPECT_FALSE(debinarize(flipped, false).crc_ok);
  auto trailing = blob;
  trailing.push_back(0);
  EXPECT_THROW(debinarize(trailing), DecodeError);
}

TEST(ParamBlob, TableMismatchRejected) {
  const RipResult r = rip(rb_batch({2}, 2, 1).circuits);
  ParamTable t = r.table;
  t.circuits.pop_back();
  EXPECT_THROW(binarize(r.report, t), ValidationError);
  t = r.table;
  t.circuits[0][0].assign(2049, 0);
  EXPECT_THROW(binarize(r.report, t), CapacityError);
}
