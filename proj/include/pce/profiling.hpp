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

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pce {

// Stage taxonomy across the application, host-software and control-software
// layers. Each stage has one fixed parent (see stage_parent()).
enum class Stage : std::uint8_t {
  Total,
  PreCompile,
  GetCircuit,
  Transpile,
  Rip,
  Active,
  BuildRun,
  Compile,
  Assemble,
  RunAllOnHost,
  RunOnHost,
  DataSort,
  ClientServer,
  LoadBatch,
  LoadCircuit,
  LoadDefinition,
  LoadEnv,
  LoadFreq,
  LoadZero,
  LoadPara,
  RunBatch,
  StartRun,
  GetData,
  Stitch,
};

inline constexpr std::size_t kStageCount = static_cast<std::size_t>(Stage::Stitch) + 1;

const char* stage_name(Stage s);
/// Throws ParseError for names outside the taxonomy.
Stage stage_from_name(const std::string& name);
std::optional<Stage> stage_parent(Stage s);
const std::vector<Stage>& all_stages();

struct StageStats {
  std::uint64_t duration_ns = 0;
  std::uint64_t iterations = 0;

  friend bool operator==(const StageStats&, const StageStats&) = default;
};

class ProfileRecord {
 public:
  std::string mode;
  std::string batch_hash;

  void add(Stage s, std::uint64_t ns, std::uint64_t iterations = 1);
  bool entered(Stage s) const { return stages_.count(s) != 0; }
  StageStats get(Stage s) const;
  std::uint64_t duration(Stage s) const { return get(s).duration_ns; }
  std::uint64_t iterations(Stage s) const { return get(s).iterations; }

  /// Records a computed stage worth `ns` whose time was already counted inside
  /// `containers`; the same amount is removed from each container (clamped at
  /// the container's own duration) so parent totals stay consistent.
  void carve(Stage computed, std::uint64_t ns, std::initializer_list<Stage> containers);

  /// Adds every stage of `other` into this record.
  void merge(const ProfileRecord& other);

  /// Entered children of `s` in taxonomy order.
  std::vector<Stage> children(Stage s) const;
  /// True if every entered parent lasts at least as long as its entered children together.
  bool nesting_consistent() const;

  const std::map<Stage, StageStats>& stages() const { return stages_; }

  friend bool operator==(const ProfileRecord&, const ProfileRecord&) = default;

 private:
  std::map<Stage, StageStats> stages_;
};

/// Opens and closes stages against a record using the monotonic clock.
/// Opening a stage whose parent is not the innermost open stage throws
/// InstrumentationError, as does closing anything but the innermost stage.
class Profiler {
 public:
  using Clock = std::chrono::steady_clock;

  /// `implicit_root`, if given, behaves as an already-open stage that is never
  /// timed; the control layer uses Stage::RunOnHost.
  explicit Profiler(ProfileRecord& record, std::optional<Stage> implicit_root = std::nullopt);

  void open(Stage s);
  void close(Stage s);
  std::size_t depth() const { return stack_.size(); }

  class Scope {
   public:
    Scope(Profiler& p, Stage s) : profiler_(&p), stage_(s) { p.open(s); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
    Scope(Scope&& o) noexcept : profiler_(o.profiler_), stage_(o.stage_) { o.profiler_ = nullptr; }
    ~Scope() {
      if (profiler_ != nullptr) profiler_->close(stage_);
    }

   private:
    Profiler* profiler_;
    Stage stage_;
  };

  [[nodiscard]] Scope scope(Stage s) { return Scope(*this, s); }
  ProfileRecord& record() { return *record_; }

 private:
  struct Frame {
    Stage stage;
    Clock::time_point start;
    bool timed;
  };
  ProfileRecord* record_;
  std::vector<Frame> stack_;
};

struct StageComparison {
  Stage stage = Stage::Total;
  StageStats baseline;
  StageStats pce;
  std::optional<double> ratio;            // baseline / pce duration; nullopt when pce is 0 and baseline is not
  std::optional<double> iteration_ratio;  // same for iteration counts
};

struct SpeedupTable {
  std::string batch_hash;
  std::vector<StageComparison> stages;
  double baseline_classical_ns = 0;
  double pce_classical_ns = 0;
  double baseline_classical_pct = 0;  // classical share of Total
  double pce_classical_pct = 0;
  double classical_reduction_pct = 0;
  std::optional<double> overall_speedup;
  std::optional<double> classical_speedup;
};

/// Classical time is Total minus Start Run. Throws IncompleteRecordError if
/// either record lacks Total, ComparisonError if batch hashes disagree.
SpeedupTable compare(const ProfileRecord& baseline, const ProfileRecord& pce);

// Report document (JSON):
//   {"format": "pce-profile", "version": 1, "mode": ..., "batch_hash": ...,
//    "stages": [{"name": "Total", "ns": .., "iterations": .., "children": [...]}]}
// Stages appear nested under their parents in taxonomy order. Ancestors that
// were never entered are emitted with "placeholder": true.
std::string report(const ProfileRecord& record);
ProfileRecord parse_report(const std::string& text);
std::string report(const SpeedupTable& table);

}  // namespace pce
