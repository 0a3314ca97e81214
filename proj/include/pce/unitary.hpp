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

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "pce/circuit.hpp"

namespace pce {

using Complex = std::complex<double>;

/// Dense row-major square complex matrix of dimension 2^n.
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;
  explicit UnitaryMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  UnitaryMatrix(std::size_t dim, std::vector<Complex> row_major);

  static UnitaryMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  const std::vector<Complex>& data() const { return data_; }

  UnitaryMatrix adjoint() const;
  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

  /// max |(U U†)_ij − δ_ij| ≤ tol
  bool is_unitary(double tol = 1e-10) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// Max elementwise |a − e^{iγ} b| with γ chosen to minimise the Frobenius
/// distance. Dimensions must agree.
double phase_insensitive_distance(const UnitaryMatrix& a, const UnitaryMatrix& b);
bool equal_up_to_global_phase(const UnitaryMatrix& a, const UnitaryMatrix& b, double tol);

// Conventions used throughout: Z(α) = diag(1, e^{iα}),
// X90 = (1/√2)[[1, −i], [−i, 1]], CZ = diag(1, 1, 1, −1).
UnitaryMatrix z_matrix(Phase alpha);
UnitaryMatrix x90_matrix();

/// Z(φ−π/2) · X90 · Z(π−θ) · X90 · Z(λ−π/2)
UnitaryMatrix u3_matrix(const U3Params& params);

/// The five native gates of u3_matrix in application order:
/// VZ(λ−π/2), X90, VZ(π−θ), X90, VZ(φ−π/2), phases canonicalised.
std::array<Gate, 5> u3_decompose(const U3Params& params, QubitId q);

/// Inverse of u3_matrix up to global phase. Throws DomainError if `u` is not
/// a 2×2 unitary within 1e-8.
U3Params u3_from_unitary(const UnitaryMatrix& u);

inline constexpr int kMaxOracleQubits = 10;

/// Full-register unitary of `c`, qubit q mapped to bit q of the basis index.
/// Delay is the identity; Measure and ParamRequest raise UnsupportedOperation,
/// as do two-qubit gates other than CZ.
UnitaryMatrix circuit_unitary(const Circuit& c, int max_qubits = kMaxOracleQubits);

/// Folds runs of VirtualZ on the same qubit (no intervening gate on that
/// qubit) into the first VZ of the run.
Circuit merge_adjacent_vz(const Circuit& c);

}  // namespace pce
