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

#include <cstdint>
#include <numbers>

namespace pce {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// An angle in radians. Not canonical unless produced by canonical_phase().
struct Phase {
  double radians = 0.0;

  friend bool operator==(const Phase&, const Phase&) = default;
};

/// Reduces `radians` into [0, 2π). Throws DomainError on NaN/inf.
Phase canonical_phase(double radians);

/// The three virtual-Z angles of a U3 gate.
struct U3Params {
  Phase phi;
  Phase theta;
  Phase lambda;

  friend bool operator==(const U3Params&, const U3Params&) = default;
};

// Unsigned 32-bit fixed point over one full turn: word = round(p / 2π · 2^32) mod 2^32.
std::uint32_t quantize_phase(Phase p);
Phase dequantize_phase(std::uint32_t word);

/// Worst-case error of a quantize/dequantize round trip, π·2^-31.
inline constexpr double kQuantizationTolerance = kPi / 2147483648.0;

}  // namespace pce
