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

// Dense-matrix reference used by the tests. Every gate is expanded to a full
// 2^n x 2^n matrix by Kronecker products and multiplied naively, sharing no
// code with the library's in-place unitary builder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pce/circuit.hpp"
#include "pce/unitary.hpp"

namespace testing_oracle {

using C = std::complex<double>;

struct Mat {
  std::size_t n = 0;
  std::vector<C> a;

  explicit Mat(std::size_t dim = 0) : n(dim), a(dim * dim) {}
  C& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
  C at(std::size_t r, std::size_t c) const { return a[r * n + c]; }

  static Mat eye(std::size_t dim) {
    Mat m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
  }
};

inline Mat mul(const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (std::size_t r = 0; r < x.n; ++r)
    for (std::size_t c = 0; c < x.n; ++c) {
      C s = 0;
      for (std::size_t k = 0; k < x.n; ++k) s += x.at(r, k) * y.at(k, c);
      out.at(r, c) = s;
    }
  return out;
}

inline Mat kron(const Mat& x, const Mat& y) {
  Mat out(x.n * y.n);
  for (std::size_t r1 = 0; r1 < x.n; ++r1)
    for (std::size_t c1 = 0; c1 < x.n; ++c1)
      for (std::size_t r2 = 0; r2 < y.n; ++r2)
        for (std::size_t c2 = 0; c2 < y.n; ++c2) out.at(r1 * y.n + r2, c1 * y.n + c2) = x.at(r1, c1) * y.at(r2, c2);
  return out;
}

inline Mat rz(double alpha) {
  Mat m(2);
  m.at(0, 0) = 1;
  m.at(1, 1) = std::polar(1.0, alpha);
  return m;
}

inline Mat sx() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat m(2);
  m.at(0, 0) = r;
  m.at(0, 1) = C(0, -r);
  m.at(1, 0) = C(0, -r);
  m.at(1, 1) = r;
  return m;
}

inline Mat pauli_x() {
  Mat m(2);
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  return m;
}

// Qubit q is bit q of the basis index, so the highest qubit is the leftmost
// Kronecker factor.
inline Mat embed(int n, int q, const Mat& g) {
  Mat out = Mat::eye(1);
  for (int k = n - 1; k >= 0; --k) out = kron(out, k == q ? g : Mat::eye(2));
  return out;
}

inline Mat cz_full(int n, int a, int b) {
  Mat m = Mat::eye(std::size_t{1} << n);
  for (std::size_t i = 0; i < m.n; ++i)
    if (((i >> a) & 1) && ((i >> b) & 1)) m.at(i, i) = -1;
  return m;
}

inline Mat circuit_matrix(const pce::Circuit& c) {
  const int n = c.n_qubits;
  Mat u = Mat::eye(std::size_t{1} << n);
  for (const pce::Gate& g : c.gates) {
    switch (g.kind) {
      case pce::GateKind::X90: u = mul(embed(n, g.q0.index, sx()), u); break;
      case pce::GateKind::VirtualZ: u = mul(embed(n, g.q0.index, rz(g.phase.radians)), u); break;
      case pce::GateKind::TwoQubit: u = mul(cz_full(n, g.q0.index, g.q1.index), u); break;
      default: break;
    }
  }
  return u;
}

// min over γ of max |x − e^{iγ} y|, γ taken from the overlap tr(y† x).
inline double phase_distance(const Mat& x, const Mat& y) {
  C overlap = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) overlap += std::conj(y.a[i]) * x.a[i];
  const C ph = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : C(1, 0);
  double d = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - ph * y.a[i]));
  return d;
}

inline Mat to_mat(const pce::UnitaryMatrix& u) {
  Mat m(u.dim());
  for (std::size_t r = 0; r < u.dim(); ++r)
    for (std::size_t c = 0; c < u.dim(); ++c) m.at(r, c) = u(r, c);
  return m;
}

}  // namespace testing_oracle
