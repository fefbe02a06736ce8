#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "snapcheck/simulator.hpp"

namespace snapcheck {

struct OverlapMarginStats {
  Micros min = 0;
  Micros max = 0;
  double mean = 0;
};

struct AccuracyReport {
  double recall = 1;
  double precision = 1;
  std::uint64_t true_pairs = 0;
  std::uint64_t detected_pairs = 0;
  std::uint64_t false_negatives = 0;
  /// Wall overlap of the missed true pairs; all zero when nothing was missed.
  OverlapMarginStats overlap_margin;
};

/// recall = |detected ∩ truth| / |truth| and precision = |detected ∩ truth| /
/// |detected|, each defined as 1 on an empty denominator.
AccuracyReport score(const PairSet& detected, const GroundTruth& truth);

/// Spearman rank correlation with average ranks for ties. Throws
/// std::invalid_argument on a length mismatch or fewer than 3 points.
/// Returns NaN when either side has zero rank variance.
double trend(std::span<const double> xs, std::span<const double> ys);

enum class GrowthClass { Constant, Linear, Quadratic, Unclassified };

const char* to_string(GrowthClass c);

/// Exponent bands used to classify a log-log slope.
struct GrowthBands {
  double constant_max = 0.3;
  double linear_lo = 0.7;
  double linear_hi = 1.3;
  double quadratic_lo = 1.7;
  double quadratic_hi = 2.3;
};

struct GrowthFit {
  double exponent = 0;
  GrowthClass growth = GrowthClass::Unclassified;
};

/// Least-squares slope of log(count) against log(size). Requires at least 3
/// points, all sizes and counts positive; throws std::invalid_argument.
GrowthFit complexity_fit(std::span<const double> sizes, std::span<const double> counts,
                         const GrowthBands& bands = {});

}  // namespace snapcheck
