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

#include "pce/batch_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pce/errors.hpp"

namespace pce {

using nlohmann::json;

json spec_to_json(const BatchSpec& spec) {
  json widths = json::array();
  for (const Width& w : spec.widths) {
    json arr = json::array();
    for (QubitId q : w) arr.push_back(q.index);
    widths.push_back(arr);
  }
  json j;
  j["kind"] = batch_kind_name(spec.kind);
  j["widths"] = widths;
  j["depths"] = spec.depths;
  j["randomizations"] = spec.randomizations;
  if (!spec.circuits_per_depth.empty()) j["circuits_per_depth"] = spec.circuits_per_depth;
  j["shots"] = spec.shots;
  j["seed"] = spec.seed;
  return j;
}

BatchSpec preset_spec(const std::string& name, std::uint64_t seed) {
  if (name == "rc20") return preset_rc20(seed);
  if (name == "frc") return preset_frc(seed);
  if (name == "cb") return preset_cb(seed);
  if (name == "rb") return preset_rb(seed);
  throw ConfigError("unknown preset '" + name + "' (expected rc20, frc, cb or rb)");
}

BatchSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("batch spec must be a JSON object");
  try {
    BatchSpec s;
    if (j.contains("preset")) s = preset_spec(j.at("preset").get<std::string>(), j.value("seed", std::uint64_t{2024}));
    if (j.contains("kind")) s.kind = parse_batch_kind(j.at("kind").get<std::string>());
    if (j.contains("widths")) {
      s.widths.clear();
      for (const auto& w : j.at("widths")) {
        Width width;
        if (w.is_number_unsigned()) {
          width.push_back(QubitId{w.get<std::uint16_t>()});
        } else {
          for (const auto& q : w) width.push_back(QubitId{q.get<std::uint16_t>()});
        }
        s.widths.push_back(std::move(width));
      }
    }
    if (j.contains("depths")) {
      const auto& d = j.at("depths");
      s.depths.clear();
      if (!d.is_array()) throw ConfigError("batch spec: depths must be a list");
      if (!d.empty() && d.front().is_array()) {
        s.depths = d.get<std::vector<std::vector<std::uint32_t>>>();
      } else {
        s.depths = {d.get<std::vector<std::uint32_t>>()};
        if (s.depths.front().empty()) s.depths.clear();
      }
    }
    if (j.contains("randomizations")) s.randomizations = j.at("randomizations").get<std::uint32_t>();
    if (j.contains("circuits_per_depth")) {
      s.circuits_per_depth = j.at("circuits_per_depth").get<std::vector<std::uint32_t>>();
    }
    if (j.contains("shots")) s.shots = j.at("shots").get<std::uint32_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("batch spec: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("short write to " + path.string());
}

BatchSpec load_spec(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return spec_from_json(j);
}

std::string batch_hash(const std::vector<Circuit>& circuits) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  const auto feed = [&](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001B3ull;
    }
  };
  for (const Circuit& c : circuits) {
    feed(to_text(c));
    feed(std::string_view("\x1e", 1));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string circuit_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "c%05zu.circ", i);
  return buf;
}

}  // namespace

void write_batch(const CircuitBatch& batch, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  json entries = json::array();
  for (std::size_t i = 0; i < batch.circuits.size(); ++i) {
    const std::string name = circuit_file_name(i);
    write_file(dir / name, to_text(batch.circuits[i]));
    json e;
    e["index"] = i;
    e["file"] = name;
    if (i < batch.labels.size()) {
      const CircuitLabel& l = batch.labels[i];
      e["width"] = l.width_index;
      e["depth"] = l.depth;
      e["randomization"] = l.randomization;
      e["role"] = l.role;
    }
    entries.push_back(std::move(e));
  }
  json m;
  m["format"] = "pce-manifest";
  m["version"] = 1;
  m["spec"] = spec_to_json(batch.spec);
  m["n_circuits"] = batch.circuits.size();
  m["batch_hash"] = batch_hash(batch.circuits);
  m["circuits"] = std::move(entries);
  write_file(dir / kManifestName, m.dump(1) + "\n");
}

LoadedBatch read_batch(const std::filesystem::path& manifest_or_dir) {
  std::filesystem::path manifest = manifest_or_dir;
  if (std::filesystem::is_directory(manifest)) manifest /= kManifestName;
  LoadedBatch out;
  try {
    out.manifest = json::parse(read_file(manifest));
  } catch (const json::parse_error& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  const std::filesystem::path base = manifest.parent_path();
  try {
    for (const auto& e : out.manifest.at("circuits")) {
      const std::filesystem::path file = base / e.at("file").get<std::string>();
      try {
        out.circuits.push_back(parse_circuit(read_file(file)));
      } catch (const ParseError& pe) {
        throw ParseError(file.string() + ": " + pe.what());
      }
      CircuitLabel l;
      l.width_index = e.value("width", 0u);
      l.depth = e.value("depth", 0u);
      l.randomization = e.value("randomization", 0u);
      l.role = e.value("role", std::string("external"));
      out.labels.push_back(std::move(l));
    }
  } catch (const json::exception& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  out.batch_hash = batch_hash(out.circuits);
  if (out.manifest.contains("batch_hash") && out.manifest["batch_hash"].get<std::string>() != out.batch_hash) {
    throw ValidationError(manifest.string() + ": batch hash mismatch, circuit files changed since generation");
  }
  return out;
}

}  // namespace pce
