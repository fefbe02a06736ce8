#include "snapcheck/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace snapcheck {

AccuracyReport score(const PairSet& detected, const GroundTruth& truth) {
  AccuracyReport r;
  r.true_pairs = truth.concurrent_pairs.size();
  r.detected_pairs = detected.size();

  std::uint64_t hits = 0;
  for (const auto& p : detected) hits += truth.concurrent_pairs.count(p);

  r.false_negatives = r.true_pairs - hits;
  r.recall = r.true_pairs ? static_cast<double>(hits) / static_cast<double>(r.true_pairs) : 1.0;
  r.precision = r.detected_pairs ? static_cast<double>(hits) / static_cast<double>(r.detected_pairs) : 1.0;

  if (r.false_negatives > 0) {
    Micros lo = std::numeric_limits<Micros>::max();
    Micros hi = std::numeric_limits<Micros>::min();
    double sum = 0;
    for (const auto& [pair, overlap] : truth.overlap_us) {
      if (detected.count(pair)) continue;
      lo = std::min(lo, overlap);
      hi = std::max(hi, overlap);
      sum += static_cast<double>(overlap);
    }
    r.overlap_margin = {lo, hi, sum / static_cast<double>(r.false_negatives)};
  }
  return r;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double trend(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("trend: xs and ys differ in length");
  if (xs.size() < 3) throw std::invalid_argument("trend: need at least 3 points");
  return pearson(average_ranks(xs), average_ranks(ys));
}

const char* to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::Constant: return "constant";
    case GrowthClass::Linear: return "linear";
    case GrowthClass::Quadratic: return "quadratic";
    case GrowthClass::Unclassified: return "unclassified";
  }
  return "?";
}

GrowthFit complexity_fit(std::span<const double> sizes, std::span<const double> counts,
                         const GrowthBands& bands) {
  if (sizes.size() != counts.size()) throw std::invalid_argument("complexity_fit: length mismatch");
  if (sizes.size() < 3) throw std::invalid_argument("complexity_fit: need at least 3 sizes");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0)) throw std::invalid_argument("complexity_fit: sizes must be positive");
    if (!(counts[i] > 0)) throw std::invalid_argument("complexity_fit: counts must be positive");
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(counts[i]));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("complexity_fit: sizes must not all be equal");

  GrowthFit fit;
  fit.exponent = sxy / sxx;
  const double e = fit.exponent;
  if (std::abs(e) < bands.constant_max) {
    fit.growth = GrowthClass::Constant;
  } else if (e >= bands.linear_lo && e <= bands.linear_hi) {
    fit.growth = GrowthClass::Linear;
  } else if (e >= bands.quadratic_lo && e <= bands.quadratic_hi) {
    fit.growth = GrowthClass::Quadratic;
  }
  return fit;
}

}  // namespace snapcheck
