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

#include "pce/param_blob.hpp"

#include "pce/bytes.hpp"

namespace pce {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'C', 'E', 'B'};

}  // namespace

std::vector<std::uint8_t> binarize(const EquivalenceReport& report, const ParamTable& table) {
  const std::size_t n = report.circuit_count();
  if (table.circuits.size() != n) {
    throw ValidationError("binarize: table has " + std::to_string(table.circuits.size()) + " circuits, report has " +
                          std::to_string(n));
  }
  std::size_t words = 0;
  for (const auto& c : table.circuits) {
    if (c.size() != table.n_qubits) throw ValidationError("binarize: circuit entry not sized to qubit count");
    for (std::size_t q = 0; q < c.size(); ++q) {
      if (c[q].size() > kMaxPhaseWordsPerQubit) throw CapacityError(static_cast<std::uint32_t>(q), c[q].size(), "binarize");
      words += c[q].size();
    }
  }
  ByteWriter w;
  w.buffer().reserve(20 + 4 * n + (n + 7) / 8 + 2 * n * table.n_qubits + 4 * words + 4);
  w.bytes(kMagic);
  w.u16(kParamBlobVersion);
  w.u16(table.n_qubits);
  w.u32(static_cast<std::uint32_t>(n));
  w.u32(static_cast<std::uint32_t>(report.group_count()));
  for (std::uint32_t i : report.order()) w.u32(i);
  std::vector<std::uint8_t> bitmap((n + 7) / 8, 0);
  for (std::uint32_t rep : report.representatives()) bitmap[rep / 8] |= static_cast<std::uint8_t>(1u << (rep % 8));
  w.bytes(bitmap);
  for (const auto& c : table.circuits) {
    for (const auto& q : c) {
      w.u16(static_cast<std::uint16_t>(q.size()));
      for (std::uint32_t word : q) w.u32(word);
    }
  }
  w.u32(crc32(w.buffer()));
  return w.take();
}

DecodedBlob debinarize(std::span<const std::uint8_t> blob, bool verify_crc) {
  ByteReader r(blob);
  const auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError(0, "bad magic, expected \"PCEB\"");
  const std::uint16_t version = r.u16();
  if (version != kParamBlobVersion) throw DecodeError(4, "unsupported blob version " + std::to_string(version));
  const std::uint16_t n_qubits = r.u16();
  const std::size_t count_at = r.offset();
  const std::uint32_t n = r.u32();
  const std::uint32_t n_groups = r.u32();
  // Each circuit needs at least 4 order bytes and 2 bytes per qubit header.
  if (static_cast<std::uint64_t>(n) * (4 + 2ull * n_qubits) > r.remaining()) {
    throw DecodeError(count_at, "circuit count " + std::to_string(n) + " exceeds blob length");
  }
  if (n_groups > n || (n > 0 && n_groups == 0)) {
    throw DecodeError(count_at + 4, "group count " + std::to_string(n_groups) + " inconsistent with " +
                                        std::to_string(n) + " circuits");
  }
  std::vector<std::uint32_t> order(n);
  const std::size_t order_at = r.offset();
  for (auto& i : order) i = r.u32();
  const auto bitmap = r.bytes((n + 7) / 8);
  const auto is_unique = [&](std::uint32_t i) { return (bitmap[i / 8] >> (i % 8)) & 1u; };

  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t i = order[k];
    if (i >= n || seen[i]) throw DecodeError(order_at + 4 * k, "order is not a permutation of 0..n-1");
    seen[i] = true;
    if (is_unique(i)) {
      groups.emplace_back();
    } else if (groups.empty()) {
      throw DecodeError(order_at, "order does not start with a representative");
    }
    groups.back().push_back(i);
  }
  if (groups.size() != n_groups) {
    throw DecodeError(count_at + 4, "group count " + std::to_string(n_groups) + " disagrees with " +
                                        std::to_string(groups.size()) + " unique flags");
  }

  DecodedBlob out;
  out.table.n_qubits = n_qubits;
  out.table.circuits.resize(n);
  for (auto& c : out.table.circuits) {
    c.resize(n_qubits);
    for (auto& q : c) {
      const std::size_t at = r.offset();
      const std::uint16_t count = r.u16();
      if (count > kMaxPhaseWordsPerQubit) {
        throw DecodeError(at, "word count " + std::to_string(count) + " exceeds bank capacity 2048");
      }
      r.need(4u * count);
      q.resize(count);
      for (auto& word : q) word = r.u32();
    }
  }
  const std::size_t crc_at = r.offset();
  const std::uint32_t stored = r.u32();
  if (r.remaining() != 0) throw DecodeError(r.offset(), std::to_string(r.remaining()) + " trailing bytes");
  out.crc_ok = stored == crc32(blob.first(crc_at));
  if (verify_crc && !out.crc_ok) throw DecodeError(crc_at, "CRC-32 mismatch");
  out.report = EquivalenceReport(std::move(groups));
  return out;
}

}  // namespace pce
