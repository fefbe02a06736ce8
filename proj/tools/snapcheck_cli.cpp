// snapcheck: scenario suite, parameter sweeps and result summaries.
//
// Exit status is 0 on success, 1 when a check or part of a sweep failed and
// 2 for usage or input errors.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snapcheck/experiment.hpp"
#include "snapcheck/scenarios.hpp"
#include "snapcheck/trace_io.hpp"

#ifndef SNAPCHECK_DEFAULT_FIXTURES
#define SNAPCHECK_DEFAULT_FIXTURES "fixtures/scenarios"
#endif

namespace fs = std::filesystem;
using namespace snapcheck;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

struct Options {
  std::string spec;
  std::string out = ".";
  std::string csv;
  std::string fixtures = SNAPCHECK_DEFAULT_FIXTURES;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;
};

const char* mark(bool reported) { return reported ? "yes" : "no "; }

void dump_stamps(const Scenario& s, const ScenarioOutcome& o) {
  std::cout << "  scenario " << s.name << " stamps (d = 1)\n";
  for (const auto& e : s.trace.events) {
    std::cout << "    " << e.id << "  wall [" << e.start << ", " << e.end << ") us";
    for (const auto& q : o.snapshot_intervals) {
      if (q.event == e.id) std::cout << "  snapshot [" << q.span.lo.tick << ", " << q.span.hi.tick << ")";
    }
    for (const auto& v : o.vector_intervals) {
      if (v.event == e.id) std::cout << "  vector " << v.span.lo << " .. " << v.span.hi;
    }
    std::cout << '\n';
  }
  if (s.expected_intervals) {
    std::cout << "    fixture stamps " << (o.stamps_ok ? "match" : "DIFFER") << '\n';
    if (!o.stamps_ok) {
      for (const auto& q : *s.expected_intervals) {
        std::cout << "      expected " << q.event << " [" << q.span.lo.tick << ", " << q.span.hi.tick << ")\n";
      }
    }
  }
}

int cmd_scenarios(const Options& opt) {
  const fs::path dir = opt.fixtures;
  for (const auto& info : kScenarios) {
    if (!fs::exists(dir / info.file)) {
      std::cerr << "missing fixture: " << (dir / info.file).string() << '\n';
      return kInputError;
    }
  }

  bool all = true;
  std::cout << "scenario  pair                SECA  CEDA  expected           result\n";
  for (const auto& info : kScenarios) {
    Scenario s;
    try {
      s = load_scenario(dir, info);
    } catch (const std::exception& e) {
      std::cout << info.name << "         corrupt fixture: " << e.what() << '\n';
      std::cerr << "scenario " << info.name << ": corrupt fixture " << (dir / info.file).string() << ": "
                << e.what() << '\n';
      all = false;
      continue;
    }
    const auto o = run_scenario(s);
    std::ostringstream pair;
    pair << s.pair.first << ' ' << s.pair.second;
    std::cout << std::left << std::setw(10) << s.name << std::setw(20) << pair.str() << mark(o.seca.count(s.pair))
              << "   " << mark(o.ceda.count(s.pair)) << "   " << std::setw(19)
              << (s.seca_should_report ? "SECA yes, CEDA no" : "SECA no, CEDA no") << (o.pass() ? "PASS" : "FAIL")
              << '\n';
    if (!o.pass()) {
      all = false;
      std::cerr << "scenario " << s.name << " failed:";
      if (!o.pair_is_concurrent) std::cerr << " pair does not overlap in wall time;";
      if (!o.seca_ok) std::cerr << " SECA reported " << o.seca.size() << " pair(s);";
      if (!o.ceda_ok) std::cerr << " CEDA reported " << o.ceda.size() << " pair(s);";
      if (!o.stamps_ok) std::cerr << " snapshot stamps differ from fixture;";
      std::cerr << '\n';
    }
    if (opt.verbose) dump_stamps(s, o);
  }
  return all ? kOk : kFailed;
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

int cmd_sweep(const Options& opt) {
  if (opt.spec.empty()) {
    std::cerr << "sweep needs --spec PATH\n";
    return kInputError;
  }
  std::ifstream is(opt.spec);
  if (!is) {
    std::cerr << "cannot open spec " << opt.spec << '\n';
    return kInputError;
  }
  ExperimentSpec spec;
  try {
    spec = parse_experiment(nlohmann::json::parse(is));
    if (opt.seed_override) spec.seeds = {*opt.seed_override};
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "spec is not valid JSON: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "invalid spec field '" << e.field() << "': " << e.what() << '\n';
    return kInputError;
  }

  const fs::path out = opt.out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::cerr << "cannot create " << out.string() << ": " << ec.message() << '\n';
    return kInputError;
  }

  std::vector<ResultRow> rows;
  int status = kOk;
  try {
    rows = run_sweep(spec, opt.jobs);
  } catch (const SweepError& e) {
    std::cerr << "sweep stopped after " << e.completed << " of " << e.total << " (point, seed) jobs: " << e.what()
              << '\n';
    rows = e.rows;
    status = kFailed;
  }
  if (!write_file(out / "results.csv", format_csv(rows)) ||
      !write_file(out / "manifest.json", make_manifest(spec, rows.size()).dump(2) + "\n")) {
    std::cerr << "cannot write results into " << out.string() << '\n';
    return kInputError;
  }
  if (opt.verbose) {
    std::cerr << "wrote " << rows.size() << " rows to " << (out / "results.csv").string() << '\n';
  }
  return status;
}

std::string fmt(double v, int precision = 3) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

int cmd_report(const Options& opt) {
  std::ifstream is(opt.csv, std::ios::binary);
  if (!is) {
    std::cerr << "cannot open " << opt.csv << '\n';
    return kInputError;
  }
  std::stringstream buffer;
  buffer << is.rdbuf();
  std::vector<ResultRow> rows;
  try {
    rows = parse_csv(buffer.str());
  } catch (const CsvError& e) {
    std::cerr << opt.csv << ": " << e.what() << '\n';
    return kInputError;
  }
  const auto summary = summarize(rows);

  std::cout << "axis_value  detector  runs  recall (mean +- sd)   precision (mean +- sd)\n";
  for (const auto& p : summary.points) {
    std::cout << std::left << std::setw(12) << p.axis_value << std::setw(10) << to_string(p.detector)
              << std::setw(6) << p.runs << fmt(p.recall_mean) << " +- " << std::setw(13) << fmt(p.recall_sd)
              << fmt(p.precision_mean) << " +- " << fmt(p.precision_sd) << '\n';
  }
  for (const auto& [d, t] : summary.recall_trend) {
    std::cout << "recall trend " << to_string(d) << ": " << fmt(t) << '\n';
  }
  for (const auto& [d, f] : summary.stamp_words_fit) {
    std::cout << "stamp words " << to_string(d) << ": exponent " << fmt(f.exponent) << " (" << to_string(f.growth)
              << ")\n";
  }
  for (const auto& [d, f] : summary.pair_checks_fit) {
    std::cout << "pair checks " << to_string(d) << ": exponent " << fmt(f.exponent) << " (" << to_string(f.growth)
              << ")\n";
  }
  if (opt.verbose) {
    std::cout << "\naxis_value  detector  stamp_words_mean  pair_checks_mean\n";
    for (const auto& p : summary.points) {
      std::cout << std::left << std::setw(12) << p.axis_value << std::setw(10) << to_string(p.detector)
                << std::setw(18) << fmt(p.stamp_words_mean, 1) << fmt(p.pair_checks_mean, 1) << '\n';
    }
  }
  if (summary.seca_dominates_ceda) {
    std::cout << "SECA recall >= CEDA at every point: " << (*summary.seca_dominates_ceda ? "yes" : "no") << '\n';
  }

  const fs::path target = fs::path(opt.out) / "summary.json";
  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (!write_file(target, summary.to_json().dump(2) + "\n")) {
    std::cerr << "cannot write " << target.string() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snapshot-clock concurrency detection experiments"};
  app.require_subcommand(1);
  Options opt;

  auto* scenarios = app.add_subcommand("scenarios", "run the canned false-negative traces through SECA and CEDA");
  scenarios->add_option("--fixtures", opt.fixtures, "directory holding the scenario fixtures");
  scenarios->add_flag("--verbose,-v", opt.verbose, "dump per-event stamps");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write results.csv and manifest.json");
  sweep->add_option("--spec", opt.spec, "experiment spec JSON")->required();
  sweep->add_option("--out", opt.out, "output directory");
  sweep->add_option("--jobs,-j", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--seed-override", opt.seed_override, "run only this seed");
  sweep->add_flag("--verbose,-v", opt.verbose, "progress on stderr");

  auto* report = app.add_subcommand("report", "summarize a results.csv and write summary.json");
  report->add_option("csv", opt.csv, "results.csv from a sweep")->required();
  report->add_option("--out", opt.out, "directory for summary.json");
  report->add_flag("--verbose,-v", opt.verbose, "also print mean stamp words and pair checks per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*scenarios) return cmd_scenarios(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*report) return cmd_report(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kInputError;
}
