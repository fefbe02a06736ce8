#include "snapcheck/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snapcheck/trace_io.hpp"

namespace snapcheck {

using nlohmann::json;

namespace {

EventId parse_id(const json& j) {
  if (!j.is_array() || j.size() != 2) throw TraceFormatError(1, "event id must be [process, seq]");
  return {j[0].get<ProcessId>(), j[1].get<std::uint32_t>()};
}

}  // namespace

Scenario read_scenario(std::istream& is, const ScenarioInfo& info) {
  std::stringstream buffer;
  buffer << is.rdbuf();
  const std::string text = buffer.str();

  Scenario s;
  s.name = info.name;
  s.seca_should_report = info.seca_should_report;
  {
    std::istringstream copy(text);
    s.trace = read_trace(copy);
  }

  // read_trace already proved the first non-blank line is a valid header.
  std::istringstream lines(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    ++n;
    if (!std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) break;
  }
  try {
    const auto header = json::parse(line);
    if (!header.contains("pair")) throw TraceFormatError(n, "scenario header lacks \"pair\"");
    const auto& pair = header.at("pair");
    if (!pair.is_array() || pair.size() != 2) throw TraceFormatError(n, "\"pair\" must hold two event ids");
    s.pair = EventPair::of(parse_id(pair[0]), parse_id(pair[1]));
    s.trace.event(s.pair.first);
    s.trace.event(s.pair.second);
    if (header.contains("snapshot_intervals")) {
      std::vector<QueuedInterval> expected;
      for (const auto& item : header.at("snapshot_intervals")) {
        if (!item.is_array() || item.size() != 3) throw TraceFormatError(n, "interval must be [id, lo, hi]");
        expected.push_back({parse_id(item[0]), {{item[1].get<std::uint64_t>()}, {item[2].get<std::uint64_t>()}}});
      }
      std::sort(expected.begin(), expected.end(),
                [](const QueuedInterval& a, const QueuedInterval& b) { return a.event < b.event; });
      s.expected_intervals = std::move(expected);
    }
  } catch (const json::exception& e) {
    throw TraceFormatError(n, e.what());
  } catch (const std::out_of_range& e) {
    throw TraceFormatError(n, std::string("pair names an unknown event: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& dir, const ScenarioInfo& info) {
  const auto path = dir / info.file;
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_scenario(is, info);
}

ScenarioOutcome run_scenario(const Scenario& scenario) {
  ScenarioOutcome out;
  out.name = scenario.name;

  const auto seca = run_trace(scenario.trace, DetectorFamily::SECA);
  const auto ceda = run_trace(scenario.trace, DetectorFamily::CEDA);
  out.seca = seca.detected;
  out.ceda = ceda.detected;
  out.snapshot_intervals = seca.snapshot_intervals;
  std::sort(out.snapshot_intervals.begin(), out.snapshot_intervals.end(),
            [](const QueuedInterval& a, const QueuedInterval& b) { return a.event < b.event; });
  out.vector_intervals = ceda.vector_intervals;

  out.pair_is_concurrent = ground_truth(scenario.trace).concurrent_pairs.count(scenario.pair) == 1;
  out.seca_ok = scenario.seca_should_report ? out.seca == PairSet{scenario.pair} : out.seca.empty();
  out.ceda_ok = out.ceda.empty();
  if (scenario.expected_intervals) {
    const auto& want = *scenario.expected_intervals;
    out.stamps_ok = want.size() == out.snapshot_intervals.size() &&
                    std::equal(want.begin(), want.end(), out.snapshot_intervals.begin(),
                               [](const QueuedInterval& a, const QueuedInterval& b) {
                                 return a.event == b.event && a.span.lo == b.span.lo && a.span.hi == b.span.hi;
                               });
  }
  return out;
}

}  // namespace snapcheck
