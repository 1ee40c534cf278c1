#pragma once

// Reproducible Monte Carlo campaigns. Every trial draws its randomness from
// trial_seed(master, N, trial), trials run in parallel into per-index slots,
// and records come back sorted by (N, trial), so output files depend only on
// the configuration and never on the thread count.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmflab/expsum.hpp"
#include "rmflab/ntcore.hpp"
#include "rmflab/rmf.hpp"
#include "rmflab/stats.hpp"

namespace rmflab::harness {

enum class Experiment { LowerBound, UpperBound, Clt, VarianceMax, GaussMax, Verify };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view text);

struct ExperimentConfig {
  Experiment experiment = Experiment::LowerBound;
  rmf::RmfKind kind = rmf::RmfKind::Steinhaus;
  std::vector<std::uint64_t> n_values;
  std::uint64_t trials = 1;
  double epsilon = 0.0;
  std::uint64_t master_seed = 0;
  std::optional<std::uint64_t> subsample;
  std::string output_path;
  unsigned threads = 0;  // 0: RMFLAB_THREADS or hardware concurrency
  OutputFormat format = OutputFormat::Csv;
  double delta = 0.1;                   // gaussmax
  bool salem_zygmund_baseline = false;  // lowerbound: also record iid +-1 coefficients
  bool smooth_part_diagnostic = false;  // lowerbound: also record smooth_part_fraction

  // Throws DomainError on empty or non-ascending N values or trials == 0.
  void validate() const;
};

// n_min, n_min * factor, ... while <= n_max (each value rounded to an integer).
std::vector<std::uint64_t> geometric_n_values(std::uint64_t n_min, std::uint64_t n_max,
                                              double factor);

struct TrialRecord {
  Experiment experiment = Experiment::LowerBound;
  rmf::RmfKind kind = rmf::RmfKind::Steinhaus;
  std::uint64_t n = 0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string statistic;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> auxiliary;

  std::optional<double> aux(std::string_view name) const;
};

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial);

// Lower-bound constants: 4/29 (Steinhaus) and
// 4 sqrt(6) / (29 pi) (Rademacher).
double lower_bound_constant(rmf::RmfKind kind);

// Name of the per-trial statistic each experiment summarizes.
std::string_view primary_statistic(Experiment experiment);

std::vector<TrialRecord> run_lower_bound(const ExperimentConfig& config);
std::vector<TrialRecord> run_upper_bound(const ExperimentConfig& config);
std::vector<TrialRecord> run_clt(const ExperimentConfig& config);
std::vector<TrialRecord> run_variance_max(const ExperimentConfig& config);

// Dispatch on config.experiment (not GaussMax or Verify).
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

struct PointMax {
  double value = 0.0;
  double theta_star = 0.0;
};

// max over points of |rough part (P(n) >= N^{4/5})| / sqrt(N), normalized by (log N)^{7/4+eps}.
PointMax upper_bound_statistic(const rmf::RmfValues& values,
                               std::span<const expsum::DiscretizationPoint> points,
                               double epsilon, const ntcore::PrimeTable& table);

// max over points of the N^{4/5} conditional variance, normalized by (log N)^{5/2+eps}.
PointMax variance_max_statistic(const rmf::RmfValues& values,
                                std::span<const expsum::DiscretizationPoint> points,
                                double epsilon, const ntcore::PrimeTable& table);

// Fraction of theta in the set A where the smooth part
// |sum_{P(n) <= N^{6/7}} f(n) e(n theta)| / sqrt(N) stays below (log N)^{1/10}.
double smooth_part_fraction(const rmf::RmfValues& values, const ntcore::PrimeTable& table);

struct GaussMaxResult {
  SummaryStats maxima;        // threshold = sqrt((2 - delta) log n)
  double probability = 0.0;   // empirical P(max <= threshold)
  double stderr_probability = 0.0;
  bool in_comparison_window = false;  // 100 eps <= delta <= 1/100
  std::vector<TrialRecord> records;
};

// Maximum of n equicorrelated standard normals (correlation eps). Domain:
// n >= 2, 0 <= eps < 1, 0 < delta < 2.
GaussMaxResult run_gauss_max(std::uint64_t n, double eps, double delta, std::uint64_t trials,
                             std::uint64_t seed, unsigned threads = 0);

struct NSummary {
  std::uint64_t n = 0;
  SummaryStats stats;
};

// Per-N summary of the records carrying `statistic`.
std::vector<NSummary> summarize_by_n(std::span<const TrialRecord> records,
                                     std::string_view statistic, double threshold);

// Largest ratio later/earlier among per-N maxima (1 when nothing grows).
double trend_growth(std::span<const NSummary> summaries);

}  // namespace rmflab::harness
