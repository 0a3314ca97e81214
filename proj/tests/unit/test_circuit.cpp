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

#include <cmath>
#include <random>

#include "oracle_math.hpp"
#include "pce/circuit.hpp"
#include "pce/errors.hpp"
#include "pce/phase.hpp"
#include "pce/unitary.hpp"

using namespace pce;
namespace to = testing_oracle;

namespace {

Circuit one_qubit(std::initializer_list<Gate> gates) {
  Circuit c;
  c.n_qubits = 1;
  c.gates = gates;
  return c;
}

Circuit random_circuit(std::mt19937_64& rng, std::uint16_t n, std::size_t len) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  Circuit c;
  c.n_qubits = n;
  while (c.gates.size() < len) {
    const QubitId q{static_cast<std::uint16_t>(qubit(rng))};
    switch (kind(rng)) {
      case 0: c.gates.push_back(Gate::x90(q)); break;
      case 1: c.gates.push_back(Gate::vz(q, canonical_phase(angle(rng)))); break;
      default: {
        if (n < 2) break;
        QubitId r{static_cast<std::uint16_t>(qubit(rng))};
        if (r == q) break;
        c.gates.push_back(Gate::cz(q, r));
      }
    }
  }
  return c;
}

}  // namespace

TEST(CanonicalPhase, Examples) {
  EXPECT_EQ(canonical_phase(0.0).radians, 0.0);
  EXPECT_NEAR(canonical_phase(-kPi / 2).radians, 3 * kPi / 2, 1e-15);
  EXPECT_NEAR(canonical_phase(5 * kPi).radians, kPi, 1e-14);
}

TEST(CanonicalPhase, RangeAndIdempotence) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double x = d(rng);
    const Phase p = canonical_phase(x);
    ASSERT_GE(p.radians, 0.0);
    ASSERT_LT(p.radians, kTwoPi);
    ASSERT_EQ(canonical_phase(p.radians), p);
    ASSERT_NEAR(std::remainder(p.radians - x, kTwoPi), 0.0, 1e-9);
  }
  EXPECT_LT(canonical_phase(-1e-300).radians, kTwoPi);
  EXPECT_LT(canonical_phase(std::nextafter(kTwoPi, 0.0)).radians, kTwoPi);
}

TEST(CanonicalPhase, NonFiniteIsDomainError) {
  EXPECT_THROW(canonical_phase(std::nan("")), DomainError);
  EXPECT_THROW(canonical_phase(INFINITY), DomainError);
  EXPECT_THROW(canonical_phase(-INFINITY), DomainError);
}

TEST(Quantize, Examples) {
  EXPECT_EQ(quantize_phase(Phase{0.0}), 0x00000000u);
  EXPECT_EQ(quantize_phase(Phase{kPi}), 0x80000000u);
  EXPECT_EQ(quantize_phase(Phase{kPi / 2}), 0x40000000u);
  EXPECT_EQ(quantize_phase(Phase{-kPi / 2}), 0xC0000000u);
  // Just below a full turn rounds up and wraps to zero.
  EXPECT_EQ(quantize_phase(Phase{std::nextafter(kTwoPi, 0.0)}), 0u);
}

TEST(Quantize, RoundTripWithinTolerance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const Phase p = canonical_phase(d(rng));
    const double back = dequantize_phase(quantize_phase(p)).radians;
    double err = std::abs(back - p.radians);
    err = std::min(err, kTwoPi - err);
    ASSERT_LE(err, kQuantizationTolerance);
  }
  EXPECT_DOUBLE_EQ(dequantize_phase(0x80000000u).radians, kPi);
}

TEST(U3Decompose, ZeroParamsPhases) {
  const auto g = u3_decompose(U3Params{}, QubitId{0});
  ASSERT_EQ(g[0].kind, GateKind::VirtualZ);
  EXPECT_NEAR(g[0].phase.radians, 3 * kPi / 2, 1e-15);
  EXPECT_EQ(g[1].kind, GateKind::X90);
  EXPECT_NEAR(g[2].phase.radians, kPi, 1e-15);
  EXPECT_EQ(g[3].kind, GateKind::X90);
  EXPECT_NEAR(g[4].phase.radians, 3 * kPi / 2, 1e-15);
}

TEST(U3Decompose, KindSequenceAndQubit) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const U3Params p{Phase{d(rng)}, Phase{d(rng)}, Phase{d(rng)}};
    const auto g = u3_decompose(p, QubitId{5});
    const GateKind want[] = {GateKind::VirtualZ, GateKind::X90, GateKind::VirtualZ, GateKind::X90, GateKind::VirtualZ};
    for (int k = 0; k < 5; ++k) {
      ASSERT_EQ(g[k].kind, want[k]);
      ASSERT_EQ(g[k].q0.index, 5);
      if (g[k].kind == GateKind::VirtualZ) {
        ASSERT_GE(g[k].phase.radians, 0.0);
        ASSERT_LT(g[k].phase.radians, kTwoPi);
      }
    }
  }
}

TEST(U3Decompose, MatchesFiveFactorProduct) {
  const double phi = 0.3, theta = 1.1, lambda = -0.7;
  const to::Mat direct = to::mul(
      to::mul(to::mul(to::mul(to::rz(phi - kPi / 2), to::sx()), to::rz(kPi - theta)), to::sx()),
      to::rz(lambda - kPi / 2));
  const U3Params p{Phase{phi}, Phase{theta}, Phase{lambda}};
  Circuit c = one_qubit({});
  for (const Gate& g : u3_decompose(p, QubitId{0})) c.gates.push_back(g);
  EXPECT_LT(to::phase_distance(to::circuit_matrix(c), direct), 1e-10);
  EXPECT_LT(to::phase_distance(to::to_mat(u3_matrix(p)), direct), 1e-10);
}

TEST(U3Matrix, ZeroParamsByExplicitProduct) {
  const to::Mat direct =
      to::mul(to::mul(to::mul(to::mul(to::rz(-kPi / 2), to::sx()), to::rz(kPi)), to::sx()), to::rz(-kPi / 2));
  EXPECT_LT(to::phase_distance(to::to_mat(u3_matrix(U3Params{})), direct), 1e-12);
  EXPECT_LT(phase_insensitive_distance(u3_matrix(U3Params{}), UnitaryMatrix::identity(2)), 1e-12);
}

TEST(U3Matrix, UnitaryAndPeriodic) {
  const U3Params flip{Phase{0}, Phase{kPi}, Phase{0}};
  EXPECT_TRUE(u3_matrix(flip).is_unitary(1e-12));
  const U3Params a{Phase{0.4}, Phase{1.3}, Phase{2.0}};
  const U3Params b{Phase{0.4}, Phase{1.3 + kTwoPi}, Phase{2.0}};
  EXPECT_TRUE(equal_up_to_global_phase(u3_matrix(a), u3_matrix(b), 1e-12));
}

TEST(U3FromUnitary, Identity) {
  const U3Params p = u3_from_unitary(UnitaryMatrix::identity(2));
  EXPECT_TRUE(equal_up_to_global_phase(u3_matrix(p), UnitaryMatrix::identity(2), 1e-8));
}

TEST(U3FromUnitary, RoundTrip) {
  const U3Params p{Phase{0.5}, Phase{1.2}, Phase{2.2}};
  const UnitaryMatrix u = u3_matrix(p);
  EXPECT_TRUE(equal_up_to_global_phase(u3_matrix(u3_from_unitary(u)), u, 1e-8));
}

TEST(U3FromUnitary, PauliX) {
  UnitaryMatrix x(2);
  x(0, 1) = 1;
  x(1, 0) = 1;
  EXPECT_TRUE(equal_up_to_global_phase(u3_matrix(u3_from_unitary(x)), x, 1e-8));
}

TEST(U3FromUnitary, RandomUnitariesIncludingBalancedMagnitudes) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> d(-kPi, kPi);
  for (int i = 0; i < 2000; ++i) {
    // Random SU(2) times a random global phase.
    const double a = d(rng), b = d(rng), c = d(rng), g = d(rng);
    const double t = i % 4 == 0 ? kPi / 2 : d(rng);
    UnitaryMatrix u(2);
    u(0, 0) = std::polar(std::cos(t / 2), a + g);
    u(0, 1) = std::polar(std::sin(t / 2), b + g);
    u(1, 0) = std::polar(-std::sin(t / 2), c + g);
    u(1, 1) = std::polar(std::cos(t / 2), b + c - a + g);
    ASSERT_TRUE(u.is_unitary(1e-12));
    ASSERT_TRUE(equal_up_to_global_phase(u3_matrix(u3_from_unitary(u)), u, 1e-8)) << "case " << i;
  }
}

TEST(U3FromUnitary, RejectsBadInput) {
  UnitaryMatrix m(2);
  m(0, 0) = 2;
  m(1, 1) = 1;
  EXPECT_THROW(u3_from_unitary(m), DomainError);
  EXPECT_THROW(u3_from_unitary(UnitaryMatrix::identity(4)), DomainError);
  UnitaryMatrix nan = UnitaryMatrix::identity(2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(u3_from_unitary(nan), DomainError);
}

TEST(CircuitUnitary, EmptyIsIdentity) {
  Circuit c;
  c.n_qubits = 2;
  const UnitaryMatrix u = circuit_unitary(c);
  ASSERT_EQ(u.dim(), 4u);
  EXPECT_EQ(phase_insensitive_distance(u, UnitaryMatrix::identity(4)), 0.0);
}

TEST(CircuitUnitary, TwoX90IsX) {
  const Circuit c = one_qubit({Gate::x90(QubitId{0}), Gate::x90(QubitId{0})});
  EXPECT_LT(to::phase_distance(to::to_mat(circuit_unitary(c)), to::pauli_x()), 1e-10);
}

TEST(CircuitUnitary, MatchesKroneckerOracle) {
  std::mt19937_64 rng(5);
  for (std::uint16_t n = 1; n <= 4; ++n) {
    for (int t = 0; t < 10; ++t) {
      const Circuit c = random_circuit(rng, n, 30);
      ASSERT_LT(to::phase_distance(to::to_mat(circuit_unitary(c)), to::circuit_matrix(c)), 1e-10);
    }
  }
}

TEST(CircuitUnitary, DelayIsIdentity) {
  Circuit c = one_qubit({Gate::x90(QubitId{0}), Gate::delay(QubitId{0}, 40)});
  Circuit d = one_qubit({Gate::x90(QubitId{0})});
  EXPECT_EQ(phase_insensitive_distance(circuit_unitary(c), circuit_unitary(d)), 0.0);
}

TEST(CircuitUnitary, Errors) {
  EXPECT_THROW(circuit_unitary(one_qubit({Gate::measure(QubitId{0})})), UnsupportedOperation);
  EXPECT_THROW(circuit_unitary(one_qubit({Gate::param_request(QubitId{0})})), UnsupportedOperation);
  Circuit iswap;
  iswap.n_qubits = 2;
  iswap.gates = {Gate::two_qubit("ISWAP", QubitId{0}, QubitId{1})};
  EXPECT_THROW(circuit_unitary(iswap), UnsupportedOperation);
  Circuit big;
  big.n_qubits = 11;
  EXPECT_THROW(circuit_unitary(big), UnsupportedOperation);
  Circuit three;
  three.n_qubits = 3;
  EXPECT_THROW(circuit_unitary(three, 2), UnsupportedOperation);
}

TEST(MergeAdjacentVz, SumsRun) {
  const Circuit c = one_qubit({Gate::vz(QubitId{0}, Phase{5.0}), Gate::vz(QubitId{0}, Phase{2.0})});
  const Circuit m = merge_adjacent_vz(c);
  ASSERT_EQ(m.gates.size(), 1u);
  EXPECT_NEAR(m.gates[0].phase.radians, 7.0 - kTwoPi, 1e-12);
}

TEST(MergeAdjacentVz, PulseBlocksMerge) {
  const Circuit c = one_qubit({Gate::vz(QubitId{0}, Phase{1.0}), Gate::x90(QubitId{0}), Gate::vz(QubitId{0}, Phase{2.0})});
  EXPECT_EQ(merge_adjacent_vz(c), c);
}

TEST(MergeAdjacentVz, OtherQubitDoesNotBlock) {
  Circuit c;
  c.n_qubits = 2;
  c.gates = {Gate::vz(QubitId{0}, Phase{1.0}), Gate::x90(QubitId{1}), Gate::vz(QubitId{0}, Phase{2.0})};
  const Circuit m = merge_adjacent_vz(c);
  ASSERT_EQ(m.gates.size(), 2u);
  EXPECT_NEAR(m.gates[0].phase.radians, 3.0, 1e-12);
  Circuit blocked = c;
  blocked.gates[1] = Gate::cz(QubitId{0}, QubitId{1});
  EXPECT_EQ(merge_adjacent_vz(blocked).gates.size(), 3u);
}

TEST(MergeAdjacentVz, RandomCircuitsPreserveUnitaryAndAreIdempotent) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const Circuit c = random_circuit(rng, static_cast<std::uint16_t>(1 + t % 4), 50);
    const Circuit m = merge_adjacent_vz(c);
    ASSERT_LE(m.gates.size(), c.gates.size());
    ASSERT_LT(to::phase_distance(to::circuit_matrix(m), to::circuit_matrix(c)), 1e-10);
    ASSERT_EQ(merge_adjacent_vz(m), m);
  }
}

TEST(Circuit, ValidateRejectsMalformed) {
  Circuit c;
  c.n_qubits = 2;
  c.gates = {Gate::x90(QubitId{2})};
  EXPECT_THROW(validate(c), ValidationError);
  c.gates = {Gate::cz(QubitId{1}, QubitId{1})};
  EXPECT_THROW(validate(c), ValidationError);
  c.gates = {Gate::measure(QubitId{0}), Gate::x90(QubitId{0})};
  EXPECT_THROW(validate(c), ValidationError);
  c.gates = {Gate::measure(QubitId{0}), Gate::cz(QubitId{1}, QubitId{0})};
  EXPECT_THROW(validate(c), ValidationError);
  Gate bad = Gate::x90(QubitId{0});
  bad.phase = Phase{1.0};
  c.gates = {bad};
  EXPECT_THROW(validate(c), ValidationError);
  c.gates = {Gate::measure(QubitId{0}), Gate::x90(QubitId{1}), Gate::measure(QubitId{1})};
  EXPECT_NO_THROW(validate(c));
  c.n_qubits = 0;
  c.gates.clear();
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(Circuit, GateLabelLimits) {
  EXPECT_THROW(GateLabel("TOOLONGNAME"), ValidationError);
  EXPECT_THROW(GateLabel(""), ValidationError);
  EXPECT_EQ(GateLabel("CZ").view(), "CZ");
}

TEST(CircuitText, RoundTripIsExact) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    Circuit c = random_circuit(rng, 3, 40);
    c.gates.push_back(Gate::delay(QubitId{1}, 123));
    c.gates.push_back(Gate::param_request(QubitId{2}));
    c.gates.push_back(Gate::measure(QubitId{0}));
    c.shots = 77;
    ASSERT_EQ(parse_circuit(to_text(c)), c);
  }
}

TEST(CircuitText, ParsesCommentsAndRejectsGarbage) {
  const Circuit c = parse_circuit("# header comment\nqubits 2 shots 5\nX90 q0  # pulse\nCZ q0 q1\nVZ q1 1.5\nMEAS q1\n");
  ASSERT_EQ(c.gates.size(), 4u);
  EXPECT_EQ(c.shots, 5u);
  EXPECT_EQ(c.gates[1].label.view(), "CZ");
  EXPECT_THROW(parse_circuit("X90 q0\n"), ParseError);
  EXPECT_THROW(parse_circuit("qubits 1 shots 1\nFOO q0\n"), ParseError);
  EXPECT_THROW(parse_circuit("qubits 1 shots 1\nX90 q7\n"), ParseError);
  EXPECT_THROW(parse_circuit("qubits 1 shots 1\nVZ q0 abc\n"), ParseError);
  EXPECT_THROW(parse_circuit("qubits 1 shots 1\nVZ q0 nan\n"), ParseError);
}

TEST(Errors, CodesAndContext) {
  try {
    throw CapacityError(3, 2049, "peel");
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.qubit(), 3u);
    EXPECT_EQ(e.count(), 2049u);
    EXPECT_NE(std::string(e.what()).find("qubit 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("2049"), std::string::npos);
    try {
      rethrow_with_context(e, "circuit 9");
    } catch (const CapacityError& f) {
      EXPECT_EQ(f.qubit(), 3u);
      EXPECT_EQ(f.count(), 2049u);
      EXPECT_NE(std::string(f.what()).find("circuit 9"), std::string::npos);
    }
  }
  EXPECT_THROW(throw_error(ErrorCode::Underflow, "x"), UnderflowError);
  EXPECT_STREQ(error_code_name(ErrorCode::Routing), "routing");
}
