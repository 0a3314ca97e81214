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

#include "pce/profiling.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"
#include "pce/errors.hpp"

namespace pce {

using nlohmann::json;

namespace {

struct StageInfo {
  Stage stage;
  const char* name;
  std::optional<Stage> parent;
};

constexpr std::array<StageInfo, kStageCount> kStages{{
    {Stage::Total, "Total", std::nullopt},
    {Stage::PreCompile, "Pre-compile", Stage::Total},
    {Stage::GetCircuit, "Get circuit", Stage::PreCompile},
    {Stage::Transpile, "Transpile", Stage::PreCompile},
    {Stage::Rip, "RIP", Stage::Total},
    {Stage::Active, "Active", Stage::Total},
    {Stage::BuildRun, "Build Run", Stage::Total},
    {Stage::Compile, "Compile", Stage::BuildRun},
    {Stage::Assemble, "Assemble", Stage::BuildRun},
    {Stage::RunAllOnHost, "RunAll on Host", Stage::BuildRun},
    {Stage::RunOnHost, "Run on Host", Stage::RunAllOnHost},
    {Stage::DataSort, "Data Sort", Stage::RunAllOnHost},
    {Stage::ClientServer, "Client/Server", Stage::BuildRun},
    {Stage::LoadBatch, "Load Batch", Stage::RunOnHost},
    {Stage::LoadCircuit, "Load circuit", Stage::LoadBatch},
    {Stage::LoadDefinition, "Load definition", Stage::LoadBatch},
    {Stage::LoadEnv, "Load env.", Stage::LoadDefinition},
    {Stage::LoadFreq, "Load freq.", Stage::LoadDefinition},
    {Stage::LoadZero, "Load zero", Stage::LoadDefinition},
    {Stage::LoadPara, "Load para", Stage::RunOnHost},
    {Stage::RunBatch, "Run Batch", Stage::RunOnHost},
    {Stage::StartRun, "Start Run", Stage::RunBatch},
    {Stage::GetData, "Get data", Stage::RunBatch},
    {Stage::Stitch, "Stitch", Stage::RunOnHost},
}};

const StageInfo& info(Stage s) { return kStages[static_cast<std::size_t>(s)]; }

std::optional<double> safe_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return num == 0 ? std::optional<double>(1.0) : std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

const char* stage_name(Stage s) { return info(s).name; }

Stage stage_from_name(const std::string& name) {
  for (const auto& i : kStages)
    if (name == i.name) return i.stage;
  throw ParseError("unknown profiling stage '" + name + "'");
}

std::optional<Stage> stage_parent(Stage s) { return info(s).parent; }

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = [] {
    std::vector<Stage> v;
    for (const auto& i : kStages) v.push_back(i.stage);
    return v;
  }();
  return stages;
}

// ---------------------------------------------------------------------------

void ProfileRecord::add(Stage s, std::uint64_t ns, std::uint64_t iterations) {
  StageStats& st = stages_[s];
  st.duration_ns += ns;
  st.iterations += iterations;
}

StageStats ProfileRecord::get(Stage s) const {
  auto it = stages_.find(s);
  return it == stages_.end() ? StageStats{} : it->second;
}

void ProfileRecord::carve(Stage computed, std::uint64_t ns, std::initializer_list<Stage> containers) {
  for (Stage c : containers) {
    auto it = stages_.find(c);
    if (it == stages_.end()) continue;
    it->second.duration_ns -= std::min(ns, it->second.duration_ns);
  }
  add(computed, ns, 1);
}

void ProfileRecord::merge(const ProfileRecord& other) {
  for (const auto& [s, st] : other.stages_) add(s, st.duration_ns, st.iterations);
}

std::vector<Stage> ProfileRecord::children(Stage s) const {
  std::vector<Stage> out;
  for (const auto& i : kStages)
    if (i.parent == s && entered(i.stage)) out.push_back(i.stage);
  return out;
}

bool ProfileRecord::nesting_consistent() const {
  for (const auto& [s, st] : stages_) {
    std::uint64_t sum = 0;
    for (Stage c : children(s)) sum += get(c).duration_ns;
    if (sum > st.duration_ns) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Profiler::Profiler(ProfileRecord& record, std::optional<Stage> implicit_root) : record_(&record) {
  if (implicit_root) stack_.push_back(Frame{*implicit_root, Clock::now(), false});
}

void Profiler::open(Stage s) {
  const auto parent = stage_parent(s);
  const bool ok = parent ? (!stack_.empty() && stack_.back().stage == *parent) : stack_.empty();
  if (!ok) {
    throw InstrumentationError(std::string("stage '") + stage_name(s) + "' must nest directly under '" +
                               (parent ? stage_name(*parent) : "<root>") + "', innermost open stage is '" +
                               (stack_.empty() ? "<none>" : stage_name(stack_.back().stage)) + "'");
  }
  stack_.push_back(Frame{s, Clock::now(), true});
}

void Profiler::close(Stage s) {
  if (stack_.empty() || stack_.back().stage != s || !stack_.back().timed) {
    throw InstrumentationError(std::string("closing stage '") + stage_name(s) + "' which is not the innermost open stage");
  }
  const auto elapsed = Clock::now() - stack_.back().start;
  stack_.pop_back();
  record_->add(s, static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()));
}

// ---------------------------------------------------------------------------

SpeedupTable compare(const ProfileRecord& baseline, const ProfileRecord& pce) {
  if (!baseline.entered(Stage::Total)) throw IncompleteRecordError("baseline record has no Total stage");
  if (!pce.entered(Stage::Total)) throw IncompleteRecordError("PCE record has no Total stage");
  if (baseline.batch_hash != pce.batch_hash) {
    throw ComparisonError("records come from different batches (" + baseline.batch_hash + " vs " + pce.batch_hash + ")");
  }
  SpeedupTable t;
  t.batch_hash = baseline.batch_hash;
  for (Stage s : all_stages()) {
    if (!baseline.entered(s) && !pce.entered(s)) continue;
    StageComparison c;
    c.stage = s;
    c.baseline = baseline.get(s);
    c.pce = pce.get(s);
    c.ratio = safe_ratio(c.baseline.duration_ns, c.pce.duration_ns);
    c.iteration_ratio = safe_ratio(c.baseline.iterations, c.pce.iterations);
    t.stages.push_back(c);
  }
  const auto classical = [](const ProfileRecord& r) {
    const std::uint64_t total = r.duration(Stage::Total);
    const std::uint64_t run = std::min(total, r.duration(Stage::StartRun));
    return static_cast<double>(total - run);
  };
  const auto pct = [](double part, std::uint64_t whole) { return whole == 0 ? 0.0 : 100.0 * part / static_cast<double>(whole); };
  t.baseline_classical_ns = classical(baseline);
  t.pce_classical_ns = classical(pce);
  t.baseline_classical_pct = pct(t.baseline_classical_ns, baseline.duration(Stage::Total));
  t.pce_classical_pct = pct(t.pce_classical_ns, pce.duration(Stage::Total));
  t.classical_reduction_pct =
      t.baseline_classical_ns == 0 ? 0.0 : 100.0 * (t.baseline_classical_ns - t.pce_classical_ns) / t.baseline_classical_ns;
  t.overall_speedup = safe_ratio(baseline.duration(Stage::Total), pce.duration(Stage::Total));
  t.classical_speedup = safe_ratio(static_cast<std::uint64_t>(t.baseline_classical_ns),
                                   static_cast<std::uint64_t>(t.pce_classical_ns));
  return t;
}

// ---------------------------------------------------------------------------

namespace {

bool subtree_needed(const ProfileRecord& r, Stage s) {
  if (r.entered(s)) return true;
  for (const auto& i : kStages)
    if (i.parent == s && subtree_needed(r, i.stage)) return true;
  return false;
}

json emit(const ProfileRecord& r, Stage s) {
  json node;
  node["name"] = stage_name(s);
  const StageStats st = r.get(s);
  node["ns"] = st.duration_ns;
  node["iterations"] = st.iterations;
  if (!r.entered(s)) node["placeholder"] = true;
  json kids = json::array();
  for (const auto& i : kStages)
    if (i.parent == s && subtree_needed(r, i.stage)) kids.push_back(emit(r, i.stage));
  if (!kids.empty()) node["children"] = std::move(kids);
  return node;
}

void absorb(ProfileRecord& r, const json& node, std::optional<Stage> expected_parent) {
  const Stage s = stage_from_name(node.at("name").get<std::string>());
  if (stage_parent(s) != expected_parent) {
    throw ParseError(std::string("report nests '") + stage_name(s) + "' under the wrong parent");
  }
  if (!node.value("placeholder", false)) {
    r.add(s, node.at("ns").get<std::uint64_t>(), node.at("iterations").get<std::uint64_t>());
  }
  if (node.contains("children")) {
    for (const auto& c : node.at("children")) absorb(r, c, s);
  }
}

}  // namespace

std::string report(const ProfileRecord& record) {
  json doc;
  doc["format"] = "pce-profile";
  doc["version"] = 1;
  doc["mode"] = record.mode;
  doc["batch_hash"] = record.batch_hash;
  doc["stages"] = json::array({emit(record, Stage::Total)});
  return doc.dump(1) + "\n";
}

ProfileRecord parse_report(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string()) != "pce-profile") throw ParseError("not a pce-profile document");
    ProfileRecord r;
    r.mode = doc.value("mode", std::string());
    r.batch_hash = doc.value("batch_hash", std::string());
    for (const auto& node : doc.at("stages")) absorb(r, node, std::nullopt);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("profile report: ") + e.what());
  }
}

std::string report(const SpeedupTable& t) {
  json doc;
  doc["format"] = "pce-speedup";
  doc["version"] = 1;
  doc["batch_hash"] = t.batch_hash;
  json rows = json::array();
  for (const auto& c : t.stages) {
    json row;
    row["stage"] = stage_name(c.stage);
    row["baseline_ns"] = c.baseline.duration_ns;
    row["pce_ns"] = c.pce.duration_ns;
    row["ratio"] = optional_number(c.ratio);
    row["baseline_iterations"] = c.baseline.iterations;
    row["pce_iterations"] = c.pce.iterations;
    row["iteration_ratio"] = optional_number(c.iteration_ratio);
    rows.push_back(std::move(row));
  }
  doc["stages"] = std::move(rows);
  doc["baseline_classical_ns"] = t.baseline_classical_ns;
  doc["pce_classical_ns"] = t.pce_classical_ns;
  doc["baseline_classical_pct"] = t.baseline_classical_pct;
  doc["pce_classical_pct"] = t.pce_classical_pct;
  doc["classical_reduction_pct"] = t.classical_reduction_pct;
  doc["classical_speedup"] = optional_number(t.classical_speedup);
  doc["overall_speedup"] = optional_number(t.overall_speedup);
  return doc.dump(1) + "\n";
}

}  // namespace pce
