#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "snapcheck/replay.hpp"

namespace snapcheck {

/// The three canned false-negative traces. In (a) and (b) the two events
/// overlap but only one endpoint ordering is visible to vector clocks, so
/// CEDA misses them while SECA sees the receiving event open at the send
/// stamp. In (c) the only messages land in later events, so neither finds
/// the overlap.
struct ScenarioInfo {
  const char* name;
  const char* file;
  bool seca_should_report;
};

inline constexpr ScenarioInfo kScenarios[] = {
    {"a", "scenario_a_staggered.jsonl", true},
    {"b", "scenario_b_nested.jsonl", true},
    {"c", "scenario_c_delayed.jsonl", false},
};

/// A fixture is an ordinary trace file whose header also carries
///   "pair": [[p, s], [p, s]]            the overlapping pair under test
///   "snapshot_intervals": [[[p, s], lo, hi], ...]   expected SECA stamps (d = 1)
struct Scenario {
  std::string name;
  bool seca_should_report = true;
  Trace trace;
  EventPair pair;
  std::optional<std::vector<QueuedInterval>> expected_intervals;
};

/// Throws TraceFormatError (or std::invalid_argument) on a bad fixture.
Scenario read_scenario(std::istream& is, const ScenarioInfo& info);
Scenario load_scenario(const std::filesystem::path& dir, const ScenarioInfo& info);

struct ScenarioOutcome {
  std::string name;
  PairSet seca;
  PairSet ceda;
  std::vector<QueuedInterval> snapshot_intervals;
  std::vector<VectorInterval> vector_intervals;
  bool pair_is_concurrent = false;
  bool seca_ok = false;
  bool ceda_ok = false;
  bool stamps_ok = true;

  bool pass() const { return pair_is_concurrent && seca_ok && ceda_ok && stamps_ok; }
};

/// SECA must report exactly the pair when expected and nothing otherwise;
/// CEDA must report nothing. The pair itself must overlap in ground truth.
ScenarioOutcome run_scenario(const Scenario& scenario);

}  // namespace snapcheck
