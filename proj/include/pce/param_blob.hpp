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
#include <span>
#include <vector>

#include "pce/rip.hpp"

namespace pce {

// ParamBlob layout, little-endian:
//   "PCEB" | version u16 | qubit-count u16 | circuit-count u32 | group-count u32
//   order: u32 × circuit-count
//   unique-flag bitmap: ceil(circuit-count / 8) bytes, bit i%8 of byte i/8
//   per circuit (by index), per qubit: word-count u16, then u32 × word-count
//   CRC-32 (zlib polynomial) of all preceding bytes, u32
inline constexpr std::uint16_t kParamBlobVersion = 1;

std::vector<std::uint8_t> binarize(const EquivalenceReport& report, const ParamTable& table);

struct DecodedBlob {
  EquivalenceReport report;
  ParamTable table;
  bool crc_ok = true;
};

/// Throws DecodeError naming the offending offset. With `verify_crc` false a
/// checksum mismatch is reported through DecodedBlob::crc_ok instead.
DecodedBlob debinarize(std::span<const std::uint8_t> blob, bool verify_crc = true);

}  // namespace pce
