// Thin Python surface over the library. Structured values cross the boundary
// as JSON text; the package's __init__ decodes them.

#include <sstream>

#include <pybind11/pybind11.h>

#include "snapcheck/experiment.hpp"
#include "snapcheck/metrics.hpp"
#include "snapcheck/replay.hpp"
#include "snapcheck/scenarios.hpp"
#include "snapcheck/trace_io.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace snapcheck {
namespace {

Trace trace_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_trace(is);
}

json pairs_json(const PairSet& pairs) {
  json out = json::array();
  for (const auto& p : pairs) {
    out.push_back({{p.first.process, p.first.seq}, {p.second.process, p.second.seq}});
  }
  return out;
}

DetectorFamily family_of(const std::string& name) {
  const auto family = parse_family(name);
  if (!family) throw std::invalid_argument("unknown detector " + name);
  return *family;
}

std::string generate(const std::string& config) {
  std::ostringstream os;
  write_trace(os, generate_trace(config_from_json(json::parse(config))));
  return os.str();
}

std::string run(const std::string& trace_text, const std::string& detector) {
  const auto trace = trace_from_text(trace_text);
  const auto truth = ground_truth(trace);
  const auto result = run_trace(trace, family_of(detector));
  const auto accuracy = score(result.detected, truth);
  return json{{"detector", to_string(result.family)},
              {"detected", pairs_json(result.detected)},
              {"recall", accuracy.recall},
              {"precision", accuracy.precision},
              {"true_pairs", accuracy.true_pairs},
              {"clock_updates", result.counters.clock_updates},
              {"stamp_words_sent", result.counters.stamp_words_sent},
              {"pair_checks", result.counters.pair_checks},
              {"drops", result.drops},
              {"degraded", result.degraded}}
      .dump();
}

std::string truth(const std::string& trace_text) {
  return pairs_json(ground_truth(trace_from_text(trace_text)).concurrent_pairs).dump();
}

std::string sweep(const std::string& spec, unsigned jobs) {
  const auto parsed = parse_experiment(json::parse(spec));
  std::vector<ResultRow> rows;
  {
    py::gil_scoped_release release;
    rows = run_sweep(parsed, jobs);
  }
  return format_csv(rows);
}

std::string summary(const std::string& csv) { return summarize(parse_csv(csv)).to_json().dump(); }

std::string scenario(const std::string& fixtures, const std::string& name) {
  for (const auto& info : kScenarios) {
    if (info.name != name) continue;
    const auto o = run_scenario(load_scenario(fixtures, info));
    return json{{"name", info.name},
                {"pass", o.pass()},
                {"seca", pairs_json(o.seca)},
                {"ceda", pairs_json(o.ceda)},
                {"stamps_ok", o.stamps_ok}}
        .dump();
  }
  throw std::invalid_argument("unknown scenario " + name);
}

}  // namespace
}  // namespace snapcheck

PYBIND11_MODULE(_snapcheck, m) {
  using namespace snapcheck;
  m.attr("__version__") = kToolVersion;
  py::register_exception<TraceFormatError>(m, "TraceFormatError", PyExc_ValueError);
  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
  m.def("generate_trace", &generate, py::arg("config_json"));
  m.def("run_detector", &run, py::arg("trace_jsonl"), py::arg("detector"));
  m.def("ground_truth", &truth, py::arg("trace_jsonl"));
  m.def("run_sweep", &sweep, py::arg("spec_json"), py::arg("jobs") = 1);
  m.def("summarize", &summary, py::arg("csv"));
  m.def("run_scenario", &scenario, py::arg("fixtures_dir"), py::arg("name"));
}
