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

#include "pce/phase.hpp"

#include <cmath>

#include "pce/errors.hpp"

namespace pce {

Phase canonical_phase(double radians) {
  if (!std::isfinite(radians)) {
    throw DomainError("canonical_phase: non-finite angle");
  }
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // fmod of a tiny negative value plus 2π can round up to exactly 2π.
  if (r >= kTwoPi) {
    r = 0.0;
  }
  return Phase{r};
}

std::uint32_t quantize_phase(Phase p) {
  const double turns = canonical_phase(p.radians).radians / kTwoPi;
  const double scaled = std::round(turns * 4294967296.0);
  // scaled lies in [0, 2^32]; 2^32 wraps to 0.
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(scaled) & 0xFFFFFFFFull);
}

Phase dequantize_phase(std::uint32_t word) {
  return Phase{static_cast<double>(word) / 4294967296.0 * kTwoPi};
}

}  // namespace pce
