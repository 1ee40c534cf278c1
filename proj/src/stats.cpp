#include "rmflab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rmflab/errors.hpp"
#include "rmflab/summation.hpp"

namespace rmflab::harness {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

SummaryStats summarize(std::span<const double> values, double threshold) {
  SummaryStats s;
  s.threshold = threshold;
  if (values.empty()) return s;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  s.count = sorted.size();
  CompensatedSum total;
  for (const double v : values) total += v;
  s.mean = total.value() / static_cast<double>(s.count);
  if (s.count > 1) {
    CompensatedSum dev;
    for (const double v : values) dev += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(dev.value() / static_cast<double>(s.count - 1));
  }
  s.min = sorted.front();
  s.max = sorted.back();
  s.q05 = quantile_sorted(sorted, 0.05);
  s.q50 = quantile_sorted(sorted, 0.50);
  s.q95 = quantile_sorted(sorted, 0.95);
  const auto above = std::count_if(sorted.begin(), sorted.end(),
                                   [threshold](double v) { return v >= threshold; });
  s.fraction_at_or_above = static_cast<double>(above) / static_cast<double>(s.count);
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance_normal(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("ks_distance_normal: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace rmflab::harness
