#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "snapcheck/metrics.hpp"
#include "snapcheck/replay.hpp"
#include "snapcheck/simulator.hpp"

namespace snapcheck {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kCsvSchema = "snapcheck-results/1";
inline constexpr const char* kCsvHeader =
    "axis_value,seed,detector,recall,precision,true_pairs,detected_pairs,clock_updates,"
    "stamp_words_sent,pair_checks,wall_ms";

enum class SweepAxis { Nodes, Delay, ErrorRate };

const char* to_string(SweepAxis axis);

struct ExperimentSpec {
  SimConfig base;
  SweepAxis axis = SweepAxis::Nodes;
  std::vector<double> points;
  std::vector<std::uint64_t> seeds;
  std::vector<DetectorFamily> detectors{DetectorFamily::SECA, DetectorFamily::CEDA};

  /// Throws ConfigError naming the field.
  void validate() const;
};

/// Parses the experiment JSON:
///
///   {"base": {<SimConfig fields>},
///    "sweep": {"axis": "nodes" | "delay" | "error_rate", "points": [...]},
///    "seeds": 30 | [1, 2, ...],
///    "detectors": ["SECA", "CEDA", "PCA"]}
///
/// An integer "seeds" means seeds 0..N-1; absent means 30. Delay points are
/// in milliseconds. Throws ConfigError naming the offending field.
ExperimentSpec parse_experiment(const nlohmann::json& j);

/// Config for one sweep point and seed. A delay point v sets the delay range
/// to [v * lo/hi, v] of the base range, i.e. v is the upper bound and the
/// base range's spread is kept.
SimConfig config_for_point(const ExperimentSpec& spec, double value, std::uint64_t seed);

/// `count` points spaced evenly in log between lo and hi (inclusive).
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct ResultRow {
  double axis_value = 0;
  std::uint64_t seed = 0;
  DetectorFamily detector = DetectorFamily::SECA;
  double recall = 0;
  double precision = 0;
  std::uint64_t true_pairs = 0;
  std::uint64_t detected_pairs = 0;
  std::uint64_t clock_updates = 0;
  std::uint64_t stamp_words_sent = 0;
  std::uint64_t pair_checks = 0;
  /// Simulated span of the trace, milliseconds.
  double wall_ms = 0;
};

/// A sweep that stopped early. `rows` holds the finished (point, seed) jobs,
/// still in sweep order.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, std::size_t completed, std::size_t total, std::vector<ResultRow> rows)
      : std::runtime_error(what), completed(completed), total(total), rows(std::move(rows)) {}
  std::size_t completed;
  std::size_t total;
  std::vector<ResultRow> rows;
};

/// Runs every (point, seed) on a pool of `jobs` threads. Rows come back in
/// (point, seed, detector) order regardless of scheduling. Throws SweepError
/// if any job fails.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, unsigned jobs = 1);

/// One row from a finished run.
ResultRow make_row(double axis_value, const Trace& trace, const GroundTruth& truth, const RunResult& run);

std::string format_csv(const std::vector<ResultRow>& rows);

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Throws CsvError on a bad header, a malformed row, or no data rows.
std::vector<ResultRow> parse_csv(const std::string& text);

nlohmann::json make_manifest(const ExperimentSpec& spec, std::size_t row_count);

struct PointSummary {
  double axis_value = 0;
  DetectorFamily detector = DetectorFamily::SECA;
  std::size_t runs = 0;
  double recall_mean = 0, recall_sd = 0;
  double precision_mean = 0, precision_sd = 0;
  double stamp_words_mean = 0;
  double pair_checks_mean = 0;
};

struct Summary {
  std::vector<PointSummary> points;
  /// Spearman of mean recall against axis value, per detector.
  std::map<DetectorFamily, double> recall_trend;
  std::map<DetectorFamily, GrowthFit> stamp_words_fit;
  std::map<DetectorFamily, GrowthFit> pair_checks_fit;
  /// SECA mean recall >= CEDA mean recall at every shared point; empty when
  /// the results lack either detector.
  std::optional<bool> seca_dominates_ceda;

  nlohmann::json to_json() const;
  const PointSummary* find(double axis_value, DetectorFamily detector) const;
};

Summary summarize(const std::vector<ResultRow>& rows);

}  // namespace snapcheck
