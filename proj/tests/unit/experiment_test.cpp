#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "snapcheck/experiment.hpp"
#include "snapcheck/trace_io.hpp"

namespace snapcheck {
namespace {

using nlohmann::json;

json small_spec() {
  return json::parse(R"({
    "base": {"events_per_process": 6, "message_delay_ms": [0.25, 8]},
    "sweep": {"axis": "nodes", "points": [2, 3, 4]},
    "seeds": 3,
    "detectors": ["SECA", "CEDA"]
  })");
}

std::string field_of(const json& j) {
  try {
    parse_experiment(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(ExperimentSpec, ParsesCountsAndLists) {
  const auto spec = parse_experiment(small_spec());
  EXPECT_EQ(spec.axis, SweepAxis::Nodes);
  EXPECT_EQ(spec.points, (std::vector<double>{2, 3, 4}));
  EXPECT_EQ(spec.seeds, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(spec.base.events_per_process, 6u);

  auto j = small_spec();
  j["seeds"] = {5, 9};
  j.erase("detectors");
  const auto listed = parse_experiment(j);
  EXPECT_EQ(listed.seeds, (std::vector<std::uint64_t>{5, 9}));
  EXPECT_EQ(listed.detectors.size(), 2u);

  j.erase("seeds");
  EXPECT_EQ(parse_experiment(j).seeds.size(), 30u);
}

TEST(ExperimentSpec, InvalidFieldsAreNamed) {
  auto j = small_spec();
  j["sweep"]["points"] = json::array();
  EXPECT_EQ(field_of(j), "sweep.points");

  j = small_spec();
  j["seeds"] = json::array();
  EXPECT_EQ(field_of(j), "seeds");

  j = small_spec();
  j["detectors"] = json::array();
  EXPECT_EQ(field_of(j), "detectors");

  j = small_spec();
  j["detectors"] = {"SECA", "LAMPORT"};
  EXPECT_EQ(field_of(j), "detectors");

  j = small_spec();
  j["sweep"]["axis"] = "users";
  EXPECT_EQ(field_of(j), "sweep.axis");

  j = small_spec();
  j["base"]["nodez"] = 4;
  EXPECT_EQ(field_of(j), "base.nodez");

  j = small_spec();
  j["sweep"]["points"] = {2, 1};
  EXPECT_EQ(field_of(j), "sweep.points");

  j = small_spec();
  j["extra"] = true;
  EXPECT_EQ(field_of(j), "extra");
}

TEST(ExperimentSpec, DelayPointKeepsTheSpread) {
  ExperimentSpec spec;
  spec.axis = SweepAxis::Delay;
  spec.base.message_delay_ms = {250, 8000};
  const auto c = config_for_point(spec, 80, 4);
  EXPECT_DOUBLE_EQ(c.message_delay_ms.hi, 80);
  EXPECT_DOUBLE_EQ(c.message_delay_ms.lo, 2.5);
  EXPECT_EQ(c.seed, 4u);
}

TEST(ExperimentSpec, LogSpacing) {
  const auto p = log_spaced(0.25, 8000, 10);
  ASSERT_EQ(p.size(), 10u);
  EXPECT_DOUBLE_EQ(p.front(), 0.25);
  EXPECT_DOUBLE_EQ(p.back(), 8000);
  for (std::size_t i = 2; i < p.size(); ++i) EXPECT_NEAR(p[i] / p[i - 1], p[1] / p[0], 1e-9);
}

TEST(Sweep, CardinalityAndOrder) {
  const auto spec = parse_experiment(small_spec());
  const auto rows = run_sweep(spec, 1);
  ASSERT_EQ(rows.size(), 3u * 3u * 2u);
  EXPECT_EQ(rows[0].axis_value, 2);
  EXPECT_EQ(rows[0].detector, DetectorFamily::SECA);
  EXPECT_EQ(rows[1].detector, DetectorFamily::CEDA);
  EXPECT_EQ(rows[2].seed, 1u);
  EXPECT_EQ(rows.back().axis_value, 4);
}

TEST(Sweep, ThreadCountDoesNotChangeBytes) {
  const auto spec = parse_experiment(small_spec());
  const auto one = format_csv(run_sweep(spec, 1));
  EXPECT_EQ(format_csv(run_sweep(spec, 3)), one);
  EXPECT_EQ(format_csv(run_sweep(spec, 8)), one);
}

TEST(Csv, RoundTrip) {
  const auto rows = run_sweep(parse_experiment(small_spec()), 2);
  const auto text = format_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  const auto back = parse_csv(text);
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(format_csv(back), text);
}

TEST(Csv, MalformedInputReportsTheLine) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_csv(text);
    } catch (const CsvError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string h = std::string(kCsvHeader) + "\n";
  const std::string good = "2,0,SECA,0.5,1,4,2,10,10,1,12.5\n";
  EXPECT_EQ(line_of(""), 1u);
  EXPECT_EQ(line_of(h), 1u);
  EXPECT_EQ(line_of("axis,seed\n" + good), 1u);
  EXPECT_EQ(line_of(h + good + "2,0,SECA,0.5\n"), 3u);
  EXPECT_EQ(line_of(h + good + good + "2,x,SECA,0.5,1,4,2,10,10,1,12.5\n"), 4u);
  EXPECT_EQ(line_of(h + "2,0,ZZZ,0.5,1,4,2,10,10,1,12.5\n"), 2u);
  EXPECT_EQ(line_of(h + "2,0,SECA,abc,1,4,2,10,10,1,12.5\n"), 2u);
  EXPECT_EQ(line_of(h + good), 0u);
}

TEST(Manifest, EchoesEverythingNeededToRerun) {
  const auto spec = parse_experiment(small_spec());
  const auto m = make_manifest(spec, 18);
  EXPECT_EQ(m.at("version"), kToolVersion);
  EXPECT_EQ(m.at("csv_schema"), kCsvSchema);
  EXPECT_EQ(m.at("axis"), "nodes");
  EXPECT_EQ(m.at("seeds").size(), 3u);
  EXPECT_EQ(m.at("rows"), 18);
  ASSERT_EQ(m.at("point_configs").size(), 3u);
  // Each echoed point config plus a seed reproduces its rows.
  auto config = m.at("point_configs")[1].at("config");
  config["seed"] = 2;
  const auto trace = generate_trace(config_from_json(config));
  const auto row = make_row(3, trace, ground_truth(trace), run_trace(trace, DetectorFamily::SECA));
  const auto rows = run_sweep(spec, 1);
  const auto& original = rows[(1 * 3 + 2) * 2];
  EXPECT_EQ(row.true_pairs, original.true_pairs);
  EXPECT_EQ(row.detected_pairs, original.detected_pairs);
  EXPECT_EQ(row.stamp_words_sent, original.stamp_words_sent);
}

TEST(Summary, MeansTrendsAndDominance) {
  std::vector<ResultRow> rows;
  auto add = [&](double x, DetectorFamily d, double recall) {
    ResultRow r;
    r.axis_value = x;
    r.detector = d;
    r.recall = recall;
    r.precision = 1;
    r.stamp_words_sent = static_cast<std::uint64_t>(10 * x);
    r.pair_checks = static_cast<std::uint64_t>(x * x);
    rows.push_back(r);
  };
  for (double x : {1.0, 2.0, 4.0}) {
    add(x, DetectorFamily::SECA, 0.9 - 0.1 * x);
    add(x, DetectorFamily::SECA, 0.7 - 0.1 * x);
    add(x, DetectorFamily::CEDA, 0.5 - 0.1 * x);
  }
  const auto s = summarize(rows);
  const auto* p = s.find(2, DetectorFamily::SECA);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->runs, 2u);
  EXPECT_NEAR(p->recall_mean, 0.6, 1e-12);
  EXPECT_NEAR(p->recall_sd, std::sqrt(0.02), 1e-12);
  EXPECT_DOUBLE_EQ(s.recall_trend.at(DetectorFamily::SECA), -1.0);
  EXPECT_EQ(s.stamp_words_fit.at(DetectorFamily::CEDA).growth, GrowthClass::Linear);
  EXPECT_EQ(s.pair_checks_fit.at(DetectorFamily::CEDA).growth, GrowthClass::Quadratic);
  ASSERT_TRUE(s.seca_dominates_ceda.has_value());
  EXPECT_TRUE(*s.seca_dominates_ceda);
  const auto j = s.to_json();
  EXPECT_EQ(j.at("points").size(), 6u);
  EXPECT_EQ(j.at("seca_dominates_ceda"), true);
}

}  // namespace
}  // namespace snapcheck
