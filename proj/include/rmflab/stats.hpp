#pragma once

#include <cstdint>
#include <span>

namespace rmflab::harness {

struct SummaryStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double fraction_at_or_above = 0.0;  // fraction of values >= threshold
  double threshold = 0.0;
};

// Quantiles use linear interpolation between order statistics (R type 7).
SummaryStats summarize(std::span<const double> values, double threshold);

double normal_cdf(double x);

// sup_x |F_n(x) - Phi(x)| for the empirical distribution of `samples`.
double ks_distance_normal(std::span<const double> samples);

}  // namespace rmflab::harness
