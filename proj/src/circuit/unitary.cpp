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

#include "pce/unitary.hpp"

#include <cmath>
#include <numeric>

#include "pce/errors.hpp"

namespace pce {

UnitaryMatrix::UnitaryMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim_ * dim_) {
    throw DomainError("UnitaryMatrix: entry count does not match dimension");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim) {
  UnitaryMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  UnitaryMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("matrix product: dimension mismatch");
  const std::size_t n = a.dim();
  UnitaryMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

bool UnitaryMatrix::is_unitary(double tol) const {
  const UnitaryMatrix p = (*this) * adjoint();
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) {
      const Complex want = r == c ? Complex{1.0} : Complex{};
      if (std::abs(p(r, c) - want) > tol) return false;
    }
  return true;
}

double phase_insensitive_distance(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("phase_insensitive_distance: dimension mismatch");
  // argmin_γ ‖a − e^{iγ} b‖_F is γ = arg tr(b† a).
  Complex overlap{};
  for (std::size_t i = 0; i < a.data().size(); ++i) overlap += std::conj(b.data()[i]) * a.data()[i];
  const Complex rot = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - rot * b.data()[i]));
  }
  return worst;
}

bool equal_up_to_global_phase(const UnitaryMatrix& a, const UnitaryMatrix& b, double tol) {
  return a.dim() == b.dim() && phase_insensitive_distance(a, b) <= tol;
}

UnitaryMatrix z_matrix(Phase alpha) {
  return UnitaryMatrix(2, {1.0, 0.0, 0.0, std::polar(1.0, alpha.radians)});
}

UnitaryMatrix x90_matrix() {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex mi{0.0, -h};
  return UnitaryMatrix(2, {h, mi, mi, h});
}

UnitaryMatrix u3_matrix(const U3Params& p) {
  const double half_pi = kPi / 2.0;
  const UnitaryMatrix x = x90_matrix();
  return z_matrix(Phase{p.phi.radians - half_pi}) * x * z_matrix(Phase{kPi - p.theta.radians}) * x *
         z_matrix(Phase{p.lambda.radians - half_pi});
}

std::array<Gate, 5> u3_decompose(const U3Params& p, QubitId q) {
  const double half_pi = kPi / 2.0;
  return {
      Gate::vz(q, canonical_phase(p.lambda.radians - half_pi)),
      Gate::x90(q),
      Gate::vz(q, canonical_phase(kPi - p.theta.radians)),
      Gate::x90(q),
      Gate::vz(q, canonical_phase(p.phi.radians - half_pi)),
  };
}

U3Params u3_from_unitary(const UnitaryMatrix& u) {
  if (u.dim() != 2) throw DomainError("u3_from_unitary: expected a 2x2 matrix");
  for (const Complex& z : u.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("u3_from_unitary: non-finite entry");
    }
  }
  if (!u.is_unitary(1e-8)) throw DomainError("u3_from_unitary: matrix is not unitary");

  // Up to a global phase g, u3_matrix(φ, θ, λ) =
  //   [[cos(θ/2),            −i e^{iλ} sin(θ/2)],
  //    [−i e^{iφ} sin(θ/2),  e^{i(φ+λ)} cos(θ/2)]].
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  const double theta = 2.0 * std::atan2(s, c);
  const double half_pi = kPi / 2.0;
  double phi = 0.0;
  double lambda = 0.0;
  constexpr double kTiny = 1e-14;
  if (s < kTiny) {
    const double g = std::arg(u(0, 0));
    lambda = std::arg(u(1, 1)) - g;
  } else if (c < kTiny) {
    const double g = std::arg(u(0, 1)) + half_pi;
    phi = std::arg(u(1, 0)) - g + half_pi;
  } else {
    const double g = std::arg(u(0, 0));
    lambda = std::arg(u(0, 1)) - g + half_pi;
    phi = std::arg(u(1, 0)) - g + half_pi;
  }
  return U3Params{canonical_phase(phi), canonical_phase(theta), canonical_phase(lambda)};
}

namespace {

void apply_1q(UnitaryMatrix& u, std::size_t bit, const UnitaryMatrix& m) {
  const std::size_t n = u.dim();
  const std::size_t mask = std::size_t{1} << bit;
  for (std::size_t r0 = 0; r0 < n; ++r0) {
    if (r0 & mask) continue;
    const std::size_t r1 = r0 | mask;
    for (std::size_t c = 0; c < n; ++c) {
      const Complex a = u(r0, c);
      const Complex b = u(r1, c);
      u(r0, c) = m(0, 0) * a + m(0, 1) * b;
      u(r1, c) = m(1, 0) * a + m(1, 1) * b;
    }
  }
}

void apply_phase(UnitaryMatrix& u, std::size_t bit, Complex factor) {
  const std::size_t n = u.dim();
  const std::size_t mask = std::size_t{1} << bit;
  for (std::size_t r = 0; r < n; ++r) {
    if (!(r & mask)) continue;
    for (std::size_t c = 0; c < n; ++c) u(r, c) *= factor;
  }
}

void apply_cz(UnitaryMatrix& u, std::size_t a, std::size_t b) {
  const std::size_t n = u.dim();
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t r = 0; r < n; ++r) {
    if ((r & mask) != mask) continue;
    for (std::size_t c = 0; c < n; ++c) u(r, c) = -u(r, c);
  }
}

}  // namespace

UnitaryMatrix circuit_unitary(const Circuit& c, int max_qubits) {
  if (max_qubits > kMaxOracleQubits) max_qubits = kMaxOracleQubits;
  if (c.n_qubits > max_qubits) {
    throw UnsupportedOperation("circuit_unitary: " + std::to_string(c.n_qubits) + " qubits exceeds limit " +
                               std::to_string(max_qubits));
  }
  UnitaryMatrix u = UnitaryMatrix::identity(std::size_t{1} << c.n_qubits);
  const UnitaryMatrix x90 = x90_matrix();
  for (const Gate& g : c.gates) {
    if (g.q0.index >= c.n_qubits || (g.kind == GateKind::TwoQubit && g.q1.index >= c.n_qubits)) {
      throw DomainError("circuit_unitary: qubit out of range");
    }
    switch (g.kind) {
      case GateKind::X90: apply_1q(u, g.q0.index, x90); break;
      case GateKind::VirtualZ: apply_phase(u, g.q0.index, std::polar(1.0, g.phase.radians)); break;
      case GateKind::Delay: break;
      case GateKind::TwoQubit:
        if (g.label.view() != "CZ") {
          throw UnsupportedOperation("circuit_unitary: two-qubit gate '" + std::string(g.label.view()) + "'");
        }
        apply_cz(u, g.q0.index, g.q1.index);
        break;
      case GateKind::Measure:
      case GateKind::ParamRequest:
        throw UnsupportedOperation(std::string("circuit_unitary: ") + gate_kind_name(g.kind) +
                                   " has no unitary");
    }
  }
  return u;
}

Circuit merge_adjacent_vz(const Circuit& c) {
  Circuit out{.gates = {}, .n_qubits = c.n_qubits, .shots = c.shots};
  out.gates.reserve(c.gates.size());
  // Index in `out` of a VZ that can still absorb phases, per qubit.
  std::vector<std::ptrdiff_t> open(c.n_qubits, -1);
  const auto slot = [&](QubitId q) -> std::ptrdiff_t& {
    if (q.index >= open.size()) open.resize(q.index + 1, -1);
    return open[q.index];
  };
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::VirtualZ) {
      std::ptrdiff_t& s = slot(g.q0);
      if (s >= 0) {
        Gate& host = out.gates[static_cast<std::size_t>(s)];
        host.phase = canonical_phase(host.phase.radians + g.phase.radians);
        continue;
      }
      s = static_cast<std::ptrdiff_t>(out.gates.size());
      out.gates.push_back(g);
      continue;
    }
    slot(g.q0) = -1;
    if (g.kind == GateKind::TwoQubit) slot(g.q1) = -1;
    out.gates.push_back(g);
  }
  return out;
}

}  // namespace pce
