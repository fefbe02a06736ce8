#include "snapcheck/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "snapcheck/trace_io.hpp"

namespace snapcheck {

using nlohmann::json;

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Nodes: return "nodes";
    case SweepAxis::Delay: return "delay";
    case SweepAxis::ErrorRate: return "error_rate";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (points.empty()) throw ConfigError("sweep.points", "must not be empty");
  if (seeds.empty()) throw ConfigError("seeds", "must not be empty");
  if (detectors.empty()) throw ConfigError("detectors", "need at least one detector");
  for (double v : points) {
    try {
      config_for_point(*this, v, 0).validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep.points", "point " + std::to_string(v) + " gives invalid " + e.what());
    }
  }
}

ExperimentSpec parse_experiment(const json& j) {
  if (!j.is_object()) throw ConfigError("spec", "expected a JSON object");
  ExperimentSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key != "base" && key != "sweep" && key != "seeds" && key != "detectors") {
      throw ConfigError(key, "unknown field");
    }
  }
  if (j.contains("base")) {
    try {
      spec.base = config_from_json(j.at("base"));
    } catch (const ConfigError& e) {
      throw ConfigError("base." + e.field(), e.what());
    }
  }

  if (!j.contains("sweep") || !j.at("sweep").is_object()) throw ConfigError("sweep", "missing sweep object");
  const auto& sweep = j.at("sweep");
  for (const auto& [key, value] : sweep.items()) {
    if (key != "axis" && key != "points") throw ConfigError("sweep." + key, "unknown field");
  }
  if (!sweep.contains("axis") || !sweep.at("axis").is_string()) throw ConfigError("sweep.axis", "missing axis");
  const auto axis = sweep.at("axis").get<std::string>();
  if (axis == "nodes") spec.axis = SweepAxis::Nodes;
  else if (axis == "delay") spec.axis = SweepAxis::Delay;
  else if (axis == "error_rate") spec.axis = SweepAxis::ErrorRate;
  else throw ConfigError("sweep.axis", "expected nodes, delay or error_rate");
  if (!sweep.contains("points") || !sweep.at("points").is_array()) throw ConfigError("sweep.points", "missing list");
  for (const auto& p : sweep.at("points")) {
    if (!p.is_number()) throw ConfigError("sweep.points", "points must be numbers");
    spec.points.push_back(p.get<double>());
  }

  if (!j.contains("seeds")) {
    for (std::uint64_t s = 0; s < 30; ++s) spec.seeds.push_back(s);
  } else if (const auto& seeds = j.at("seeds"); seeds.is_number_integer() && seeds.get<std::int64_t>() > 0) {
    for (std::uint64_t s = 0; s < seeds.get<std::uint64_t>(); ++s) spec.seeds.push_back(s);
  } else if (seeds.is_array()) {
    for (const auto& s : seeds) {
      if (!s.is_number_integer() || s.get<std::int64_t>() < 0) throw ConfigError("seeds", "seeds must be non-negative integers");
      spec.seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    throw ConfigError("seeds", "expected a count or a list");
  }

  if (j.contains("detectors")) {
    spec.detectors.clear();
    if (!j.at("detectors").is_array()) throw ConfigError("detectors", "expected a list");
    for (const auto& d : j.at("detectors")) {
      auto family = d.is_string() ? parse_family(d.get<std::string>()) : std::nullopt;
      if (!family) throw ConfigError("detectors", "unknown detector " + d.dump());
      if (std::find(spec.detectors.begin(), spec.detectors.end(), *family) == spec.detectors.end()) {
        spec.detectors.push_back(*family);
      }
    }
  }
  spec.validate();
  return spec;
}

SimConfig config_for_point(const ExperimentSpec& spec, double value, std::uint64_t seed) {
  SimConfig c = spec.base;
  c.seed = seed;
  switch (spec.axis) {
    case SweepAxis::Nodes:
      if (value != std::floor(value) || value < 0 || value > 1e6) {
        throw ConfigError("nodes", "node count must be an integer");
      }
      c.nodes = static_cast<std::uint32_t>(value);
      break;
    case SweepAxis::Delay: {
      const auto& base = spec.base.message_delay_ms;
      const double ratio = base.hi > 0 ? base.lo / base.hi : 1.0;
      c.message_delay_ms = {value * ratio, value};
      break;
    }
    case SweepAxis::ErrorRate:
      c.error_rate = value;
      break;
  }
  return c;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0) || !(hi > lo)) throw std::invalid_argument("log_spaced: need 0 < lo < hi, count >= 2");
  std::vector<double> out;
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo * std::exp(step * static_cast<double>(i)));
  out.back() = hi;
  return out;
}

ResultRow make_row(double axis_value, const Trace& trace, const GroundTruth& truth, const RunResult& run) {
  const auto acc = score(run.detected, truth);
  Micros lo = std::numeric_limits<Micros>::max(), hi = 0;
  for (const auto& e : trace.events) {
    lo = std::min(lo, e.start);
    hi = std::max(hi, e.end);
  }
  ResultRow row;
  row.axis_value = axis_value;
  row.seed = trace.config.seed;
  row.detector = run.family;
  row.recall = acc.recall;
  row.precision = acc.precision;
  row.true_pairs = acc.true_pairs;
  row.detected_pairs = acc.detected_pairs;
  row.clock_updates = run.counters.clock_updates;
  row.stamp_words_sent = run.counters.stamp_words_sent;
  row.pair_checks = run.counters.pair_checks;
  row.wall_ms = trace.events.empty() ? 0.0 : static_cast<double>(hi - lo) / 1000.0;
  return row;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate();
  const std::size_t per_job = spec.detectors.size();
  const std::size_t job_count = spec.points.size() * spec.seeds.size();
  std::vector<ResultRow> rows(job_count * per_job);
  std::vector<char> done(job_count, 0);

  std::atomic<std::size_t> next{0};
  std::string failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < job_count; job = next++) {
      const double value = spec.points[job / spec.seeds.size()];
      const auto seed = spec.seeds[job % spec.seeds.size()];
      try {
        const Trace trace = generate_trace(config_for_point(spec, value, seed));
        const GroundTruth truth = ground_truth(trace);
        for (std::size_t d = 0; d < per_job; ++d) {
          rows[job * per_job + d] = make_row(value, trace, truth, run_trace(trace, spec.detectors[d]));
        }
        done[job] = 1;
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (failure.empty()) {
          std::ostringstream os;
          os << "axis_value " << value << ", seed " << seed << ": " << e.what();
          failure = os.str();
        }
        next = job_count;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(job_count)));
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!failure.empty()) {
    std::vector<ResultRow> partial;
    std::size_t completed = 0;
    for (std::size_t job = 0; job < job_count; ++job) {
      if (!done[job]) continue;
      ++completed;
      partial.insert(partial.end(), rows.begin() + static_cast<std::ptrdiff_t>(job * per_job),
                     rows.begin() + static_cast<std::ptrdiff_t>((job + 1) * per_job));
    }
    throw SweepError(failure, completed, job_count, std::move(partial));
  }
  return rows;
}

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << format_value(r.axis_value) << ',' << r.seed << ',' << to_string(r.detector) << ',' << std::fixed
       << std::setprecision(6) << r.recall << ',' << r.precision << ',' << r.true_pairs << ','
       << r.detected_pairs << ',' << r.clock_updates << ',' << r.stamp_words_sent << ',' << r.pair_checks
       << ',' << std::setprecision(3) << r.wall_ms << '\n';
    os.unsetf(std::ios::floatfield);
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line, const char* column) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw CsvError(line, std::string("bad number in ") + column + ": '" + s + "'");
  return v;
}

std::uint64_t to_count(const std::string& s, std::size_t line, const char* column) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw CsvError(line, std::string("bad count in ") + column + ": '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw CsvError(line, std::string("count out of range in ") + column);
  }
}

}  // namespace

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::size_t n = 0;
  std::vector<ResultRow> rows;
  bool header = false;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kCsvHeader) throw CsvError(n, "unexpected header");
      header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 11) throw CsvError(n, "expected 11 columns, got " + std::to_string(cells.size()));
    ResultRow r;
    r.axis_value = to_double(cells[0], n, "axis_value");
    r.seed = to_count(cells[1], n, "seed");
    auto family = parse_family(cells[2]);
    if (!family) throw CsvError(n, "unknown detector '" + cells[2] + "'");
    r.detector = *family;
    r.recall = to_double(cells[3], n, "recall");
    r.precision = to_double(cells[4], n, "precision");
    r.true_pairs = to_count(cells[5], n, "true_pairs");
    r.detected_pairs = to_count(cells[6], n, "detected_pairs");
    r.clock_updates = to_count(cells[7], n, "clock_updates");
    r.stamp_words_sent = to_count(cells[8], n, "stamp_words_sent");
    r.pair_checks = to_count(cells[9], n, "pair_checks");
    r.wall_ms = to_double(cells[10], n, "wall_ms");
    rows.push_back(r);
  }
  if (!header) throw CsvError(n == 0 ? 1 : n, "empty file");
  if (rows.empty()) throw CsvError(n, "no data rows");
  return rows;
}

json make_manifest(const ExperimentSpec& spec, std::size_t row_count) {
  json detectors = json::array();
  for (auto d : spec.detectors) detectors.push_back(to_string(d));
  json point_configs = json::array();
  for (double v : spec.points) {
    auto c = config_to_json(config_for_point(spec, v, 0));
    c.erase("seed");
    point_configs.push_back({{"axis_value", v}, {"config", c}});
  }
  return json{
      {"tool", "snapcheck"},
      {"version", kToolVersion},
      {"csv_schema", kCsvSchema},
      {"csv_columns", kCsvHeader},
      {"time_unit", "ms"},
      {"axis", to_string(spec.axis)},
      {"points", spec.points},
      {"delay_axis_rule",
       "a delay point v sets message_delay_ms to [v * base_lo / base_hi, v]"},
      {"seeds", spec.seeds},
      {"detectors", detectors},
      {"base_config", config_to_json(spec.base)},
      {"point_configs", point_configs},
      {"rows", row_count},
  };
}

const PointSummary* Summary::find(double axis_value, DetectorFamily detector) const {
  for (const auto& p : points) {
    if (p.axis_value == axis_value && p.detector == detector) return &p;
  }
  return nullptr;
}

json Summary::to_json() const {
  auto number = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json pts = json::array();
  for (const auto& p : points) {
    pts.push_back({{"axis_value", p.axis_value},
                   {"detector", to_string(p.detector)},
                   {"runs", p.runs},
                   {"recall_mean", p.recall_mean},
                   {"recall_sd", p.recall_sd},
                   {"precision_mean", p.precision_mean},
                   {"precision_sd", p.precision_sd},
                   {"stamp_words_mean", p.stamp_words_mean},
                   {"pair_checks_mean", p.pair_checks_mean}});
  }
  json trends = json::object();
  for (const auto& [d, t] : recall_trend) trends[to_string(d)] = number(t);
  auto fits = [&](const std::map<DetectorFamily, GrowthFit>& m) {
    json out = json::object();
    for (const auto& [d, f] : m) out[to_string(d)] = {{"exponent", f.exponent}, {"class", to_string(f.growth)}};
    return out;
  };
  json out{{"points", pts},
           {"recall_trend", trends},
           {"stamp_words_fit", fits(stamp_words_fit)},
           {"pair_checks_fit", fits(pair_checks_fit)}};
  out["seca_dominates_ceda"] = seca_dominates_ceda ? json(*seca_dominates_ceda) : json(nullptr);
  return out;
}

Summary summarize(const std::vector<ResultRow>& rows) {
  Summary s;
  std::map<std::pair<double, DetectorFamily>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[{r.axis_value, r.detector}].push_back(&r);

  auto mean_sd = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double m = 0;
    for (double x : v) m += x;
    m /= n;
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair(m, v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0);
  };

  for (const auto& [key, members] : groups) {
    PointSummary p;
    p.axis_value = key.first;
    p.detector = key.second;
    p.runs = members.size();
    std::vector<double> rec, prec, words, checks;
    for (const auto* r : members) {
      rec.push_back(r->recall);
      prec.push_back(r->precision);
      words.push_back(static_cast<double>(r->stamp_words_sent));
      checks.push_back(static_cast<double>(r->pair_checks));
    }
    std::tie(p.recall_mean, p.recall_sd) = mean_sd(rec);
    std::tie(p.precision_mean, p.precision_sd) = mean_sd(prec);
    p.stamp_words_mean = mean_sd(words).first;
    p.pair_checks_mean = mean_sd(checks).first;
    s.points.push_back(p);
  }

  std::set<DetectorFamily> families;
  for (const auto& p : s.points) families.insert(p.detector);
  for (auto d : families) {
    std::vector<double> xs, ys, words, checks;
    for (const auto& p : s.points) {
      if (p.detector != d) continue;
      xs.push_back(p.axis_value);
      ys.push_back(p.recall_mean);
      words.push_back(p.stamp_words_mean);
      checks.push_back(p.pair_checks_mean);
    }
    if (xs.size() < 3) continue;
    s.recall_trend[d] = trend(xs, ys);
    const bool positive = std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0; });
    auto fit = [&](const std::vector<double>& ys2) -> std::optional<GrowthFit> {
      if (!positive || !std::all_of(ys2.begin(), ys2.end(), [](double y) { return y > 0; })) return std::nullopt;
      return complexity_fit(xs, ys2);
    };
    if (auto f = fit(words)) s.stamp_words_fit[d] = *f;
    if (auto f = fit(checks)) s.pair_checks_fit[d] = *f;
  }

  if (families.count(DetectorFamily::SECA) && families.count(DetectorFamily::CEDA)) {
    bool dominates = true;
    for (const auto& p : s.points) {
      if (p.detector != DetectorFamily::SECA) continue;
      if (const auto* c = s.find(p.axis_value, DetectorFamily::CEDA)) {
        dominates = dominates && p.recall_mean >= c->recall_mean;
      }
    }
    s.seca_dominates_ceda = dominates;
  }
  return s;
}

}  // namespace snapcheck
