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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pce/generators.hpp"

namespace pce {

// BatchSpec config file (JSON):
//   {
//     "kind": "RB" | "RC" | "FRC" | "CB",
//     "widths": [[0], [0, 1]],
//     "depths": [[16, 128], [8, 64]]   // or one shared list: [1, 10, 20]
//     "randomizations": 30,
//     "circuits_per_depth": [180, 220], // optional, CB
//     "shots": 100,
//     "seed": 2024
//   }
// "preset": "rc20" | "frc" | "cb" | "rb" may replace the body; explicit keys
// then override preset fields.
nlohmann::json spec_to_json(const BatchSpec& spec);
BatchSpec spec_from_json(const nlohmann::json& j);
BatchSpec load_spec(const std::filesystem::path& path);
BatchSpec preset_spec(const std::string& name, std::uint64_t seed);

/// FNV-1a 64 over the text form of every circuit, in order, as 16 hex digits.
std::string batch_hash(const std::vector<Circuit>& circuits);

struct LoadedBatch {
  std::vector<Circuit> circuits;
  std::vector<CircuitLabel> labels;
  std::string batch_hash;
  nlohmann::json manifest;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Writes c00000.circ, c00001.circ, … and manifest.json into `dir`.
void write_batch(const CircuitBatch& batch, const std::filesystem::path& dir);

/// Reads a manifest (or a directory holding manifest.json) and every circuit
/// file it lists. Circuit files are resolved relative to the manifest. The
/// manifest of an external workload needs only {"circuits": [{"file": ...}]}.
LoadedBatch read_batch(const std::filesystem::path& manifest_or_dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace pce
