#include "rmflab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rmflab/errors.hpp"
#include "rmflab/parallel.hpp"
#include "rmflab/random.hpp"
#include "rmflab/variance.hpp"

namespace rmflab::harness {

namespace {

constexpr std::uint64_t kThetaStream = 0x7E7A'0000ull;
constexpr std::uint64_t kSubsampleTag = 0xD5;

struct Task {
  std::uint64_t n;
  std::uint64_t trial;
};

std::vector<Task> campaign_tasks(const ExperimentConfig& config) {
  std::vector<Task> tasks;
  for (const std::uint64_t n : config.n_values) {
    for (std::uint64_t t = 0; t < config.trials; ++t) tasks.push_back({n, t});
  }
  return tasks;
}

ntcore::PrimeTable campaign_table(const ExperimentConfig& config) {
  return ntcore::PrimeTable::build(std::max<std::uint64_t>(config.n_values.back(), 2));
}

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return a.n != b.n ? a.n < b.n : a.trial < b.trial;
  });
}

std::vector<TrialRecord> flatten(std::vector<std::vector<TrialRecord>>& per_task) {
  std::vector<TrialRecord> out;
  for (auto& group : per_task) {
    for (auto& r : group) out.push_back(std::move(r));
  }
  sort_records(out);
  return out;
}

std::vector<expsum::DiscretizationPoint> campaign_points(const ExperimentConfig& config,
                                                         std::uint64_t n, std::uint64_t seed) {
  const double q_bound = expsum::default_denominator_bound(n);
  if (config.subsample) {
    return expsum::sample_discretization(n, q_bound, *config.subsample,
                                         derive_seed(seed, kSubsampleTag, n));
  }
  return expsum::build_discretization(n, q_bound);
}

// Shared driver for the two maxima over the discretization set.
std::vector<TrialRecord> run_over_discretization(
    const ExperimentConfig& config, Experiment tag, std::string_view statistic,
    PointMax (*evaluate)(const rmf::RmfValues&, std::span<const expsum::DiscretizationPoint>,
                         double, const ntcore::PrimeTable&)) {
  config.validate();
  if (config.kind != rmf::RmfKind::Steinhaus) {
    throw UnsupportedModelError(
        std::string(to_string(tag)) +
        ": only the Steinhaus model is supported; the Rademacher analogue of the large-prime "
        "upper bound is an open problem (the change of variables yields ten parameters instead "
        "of four)");
  }
  const auto table = campaign_table(config);
  const auto tasks = campaign_tasks(config);
  std::vector<std::vector<TrialRecord>> per_task(tasks.size());
  parallel_for(tasks.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
    const auto [n, trial] = tasks[i];
    const std::uint64_t seed = trial_seed(config.master_seed, n, trial);
    const auto values = rmf::sample(rmf::RmfKind::Steinhaus, n, seed, table);
    const auto points = campaign_points(config, n, seed);
    const PointMax best = evaluate(values, points, config.epsilon, table);
    const double total =
        static_cast<double>(expsum::discretization_size(n, expsum::default_denominator_bound(n)));
    per_task[i].push_back({tag,
                           rmf::RmfKind::Steinhaus,
                           n,
                           trial,
                           seed,
                           std::string(statistic),
                           best.value,
                           {{"theta_star", best.theta_star},
                            {"epsilon", config.epsilon},
                            {"points", static_cast<double>(points.size())},
                            {"total_points", total}}});
  });
  return flatten(per_task);
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::LowerBound: return "lowerbound";
    case Experiment::UpperBound: return "upperbound";
    case Experiment::Clt: return "clt";
    case Experiment::VarianceMax: return "variancemax";
    case Experiment::GaussMax: return "gaussmax";
    case Experiment::Verify: return "verify";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view text) {
  for (const auto e : {Experiment::LowerBound, Experiment::UpperBound, Experiment::Clt,
                       Experiment::VarianceMax, Experiment::GaussMax, Experiment::Verify}) {
    if (to_string(e) == text) return e;
  }
  throw DomainError("unknown experiment: " + std::string(text));
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw DomainError("ExperimentConfig: no N values");
  if (!std::is_sorted(n_values.begin(), n_values.end()) ||
      std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end()) {
    throw DomainError("ExperimentConfig: N values must be strictly ascending");
  }
  if (n_values.front() < 2) throw DomainError("ExperimentConfig: N must be >= 2");
  if (trials < 1) throw DomainError("ExperimentConfig: trials must be >= 1");
  if (!(epsilon >= 0.0)) throw DomainError("ExperimentConfig: epsilon must be >= 0");
  if (n_values.back() > ntcore::kDefaultSieveCap) {
    throw ResourceError("ExperimentConfig: N above the sieve cap");
  }
}

std::vector<std::uint64_t> geometric_n_values(std::uint64_t n_min, std::uint64_t n_max,
                                              double factor) {
  if (n_min < 2 || n_max < n_min) throw DomainError("geometric_n_values: need 2 <= n_min <= n_max");
  if (!(factor > 1.0)) throw DomainError("geometric_n_values: factor must exceed 1");
  std::vector<std::uint64_t> out;
  for (double x = static_cast<double>(n_min); std::llround(x) <= static_cast<long long>(n_max);
       x *= factor) {
    const auto v = static_cast<std::uint64_t>(std::llround(x));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

std::optional<double> TrialRecord::aux(std::string_view name) const {
  for (const auto& [key, v] : auxiliary) {
    if (key == name) return v;
  }
  return std::nullopt;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial) {
  return derive_seed(master, n, trial);
}

double lower_bound_constant(rmf::RmfKind kind) {
  return kind == rmf::RmfKind::Steinhaus ? 4.0 / 29.0
                                          : 4.0 * std::sqrt(6.0) / (29.0 * std::numbers::pi);
}

std::string_view primary_statistic(Experiment experiment) {
  switch (experiment) {
    case Experiment::LowerBound: return "max_over_sqrt_log_n";
    case Experiment::UpperBound: return "rough_max_normalized";
    case Experiment::Clt: return "ks_distance";
    case Experiment::VarianceMax: return "variance_max_normalized";
    case Experiment::GaussMax: return "max";
    case Experiment::Verify: return "check";
  }
  return "";
}

double smooth_part_fraction(const rmf::RmfValues& values, const ntcore::PrimeTable& table) {
  const auto set_a = expsum::build_theta_set_a(values.n, table);
  const auto smooth = expsum::CoefficientFilter::smooth_at_most(ntcore::Exponent(6, 7)).apply(values, table);
  const double bound = std::pow(std::log(static_cast<double>(values.n)), 0.1);
  std::size_t below = 0;
  for (const double theta : set_a.thetas) {
    if (std::abs(expsum::eval_point(smooth, theta)) < bound) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(set_a.thetas.size());
}

std::vector<TrialRecord> run_lower_bound(const ExperimentConfig& config) {
  config.validate();
  const auto table = campaign_table(config);
  const auto tasks = campaign_tasks(config);
  std::vector<std::vector<TrialRecord>> per_task(tasks.size());
  const auto statistic = std::string(primary_statistic(Experiment::LowerBound));
  parallel_for(tasks.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
    const auto [n, trial] = tasks[i];
    const std::uint64_t seed = trial_seed(config.master_seed, n, trial);
    const double sqrt_log_n = std::sqrt(std::log(static_cast<double>(n)));
    const auto values = rmf::sample(config.kind, n, seed, table);
    const auto best = expsum::max_modulus(values.values);
    auto& out = per_task[i];
    out.push_back({Experiment::LowerBound, config.kind, n, trial, seed, statistic,
                   best.magnitude / sqrt_log_n, {{"theta_star", best.theta_star}}});
    if (config.salem_zygmund_baseline) {
      const auto signs = rmf::independent_signs(n, seed);
      const auto base = expsum::max_modulus(signs);
      out.push_back({Experiment::LowerBound, config.kind, n, trial, seed,
                     "salem_zygmund_max_over_sqrt_log_n", base.magnitude / sqrt_log_n,
                     {{"theta_star", base.theta_star}}});
    }
    if (config.smooth_part_diagnostic) {
      out.push_back({Experiment::LowerBound, config.kind, n, trial, seed, "smooth_part_fraction",
                     smooth_part_fraction(values, table), {}});
    }
  });
  return flatten(per_task);
}

PointMax upper_bound_statistic(const rmf::RmfValues& values,
                               std::span<const expsum::DiscretizationPoint> points,
                               double epsilon, const ntcore::PrimeTable& table) {
  if (points.empty()) throw DomainError("upper_bound_statistic: empty point set");
  PointMax best{.value = -1.0, .theta_star = 0.0};
  for (const auto& pt : points) {
    const double mag = std::abs(expsum::rough_sum_by_r(values, pt.theta, ntcore::Exponent(4, 5), table));
    if (mag > best.value || (mag == best.value && pt.theta < best.theta_star)) {
      best = {mag, pt.theta};
    }
  }
  best.value /= std::pow(std::log(static_cast<double>(values.n)), 1.75 + epsilon);
  return best;
}

PointMax variance_max_statistic(const rmf::RmfValues& values,
                                std::span<const expsum::DiscretizationPoint> points,
                                double epsilon, const ntcore::PrimeTable& table) {
  const auto best = variance::max_variance_over_d(values, points, variance::upper_bound_spec(),
                                                  std::nullopt, 0, table);
  return {best.value / std::pow(std::log(static_cast<double>(values.n)), 2.5 + epsilon),
          best.theta_star};
}

std::vector<TrialRecord> run_upper_bound(const ExperimentConfig& config) {
  return run_over_discretization(config, Experiment::UpperBound,
                                 primary_statistic(Experiment::UpperBound), &upper_bound_statistic);
}

std::vector<TrialRecord> run_variance_max(const ExperimentConfig& config) {
  return run_over_discretization(config, Experiment::VarianceMax,
                                 primary_statistic(Experiment::VarianceMax),
                                 &variance_max_statistic);
}

std::vector<TrialRecord> run_clt(const ExperimentConfig& config) {
  config.validate();
  const auto table = campaign_table(config);
  const unsigned threads = resolve_thread_count(config.threads);
  std::vector<TrialRecord> records;
  for (const std::uint64_t n : config.n_values) {
    const std::uint64_t seed = trial_seed(config.master_seed, n, 0);
    const auto values = rmf::sample(config.kind, n, seed, table);
    const std::uint64_t count = config.trials;
    std::vector<double> thetas(count);
    std::vector<double> samples(count);
    parallel_for(count, threads, [&](std::size_t i) {
      thetas[i] = to_unit_interval(counter_draw(seed, kThetaStream, i)[0]);
      samples[i] = std::numbers::sqrt2 * expsum::eval_point(values.values, thetas[i]).real();
    });
    records.push_back({Experiment::Clt, config.kind, n, 0, seed, "ks_distance",
                       ks_distance_normal(samples), {}});
    for (std::uint64_t i = 0; i < count; ++i) {
      records.push_back({Experiment::Clt, config.kind, n, i, seed, "sqrt2_re_p", samples[i],
                         {{"theta", thetas[i]}}});
    }
  }
  sort_records(records);
  return records;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::LowerBound: return run_lower_bound(config);
    case Experiment::UpperBound: return run_upper_bound(config);
    case Experiment::Clt: return run_clt(config);
    case Experiment::VarianceMax: return run_variance_max(config);
    default: throw DomainError("run_experiment: use run_gauss_max / run_verify for this experiment");
  }
}

GaussMaxResult run_gauss_max(std::uint64_t n, double eps, double delta, std::uint64_t trials,
                             std::uint64_t seed, unsigned threads) {
  if (n < 2) throw DomainError("run_gauss_max: n must be >= 2");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("run_gauss_max: eps must lie in [0, 1)");
  if (!(delta > 0.0 && delta < 2.0)) throw DomainError("run_gauss_max: delta must lie in (0, 2)");
  if (trials < 1) throw DomainError("run_gauss_max: trials must be >= 1");

  const double threshold = std::sqrt((2.0 - delta) * std::log(static_cast<double>(n)));
  const double shared_scale = std::sqrt(eps);
  const double own_scale = std::sqrt(1.0 - eps);
  std::vector<double> maxima(trials);
  parallel_for(trials, resolve_thread_count(threads), [&](std::size_t t) {
    // X_i = sqrt(eps) Z_0 + sqrt(1 - eps) Z_i, so max X = sqrt(eps) Z_0 + sqrt(1 - eps) max Z_i
    const std::uint64_t stream = t + 1;
    double top = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < n; i += 2) {
      const auto z = counter_normal_pair(seed, stream, i / 2);
      top = std::max(top, z[0]);
      if (i + 1 < n) top = std::max(top, z[1]);
    }
    const double shared = counter_normal_pair(seed, 0, t)[0];
    maxima[t] = shared_scale * shared + own_scale * top;
  });

  GaussMaxResult result;
  result.maxima = summarize(maxima, threshold);
  result.probability = 1.0 - result.maxima.fraction_at_or_above;
  result.stderr_probability =
      std::sqrt(result.probability * (1.0 - result.probability) / static_cast<double>(trials));
  result.in_comparison_window = 100.0 * eps <= delta && delta <= 0.01;
  result.records.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    result.records.push_back({Experiment::GaussMax, rmf::RmfKind::Steinhaus, n, t, seed, "max",
                              maxima[t], {{"epsilon", eps}, {"delta", delta}}});
  }
  return result;
}

std::vector<NSummary> summarize_by_n(std::span<const TrialRecord> records,
                                     std::string_view statistic, double threshold) {
  std::vector<NSummary> out;
  std::vector<double> bucket;
  std::uint64_t current = 0;
  bool open = false;
  auto close = [&] {
    if (open) out.push_back({current, summarize(bucket, threshold)});
    bucket.clear();
  };
  for (const auto& r : records) {
    if (r.statistic != statistic) continue;
    if (!open || r.n != current) {
      close();
      current = r.n;
      open = true;
    }
    bucket.push_back(r.value);
  }
  close();
  return out;
}

double trend_growth(std::span<const NSummary> summaries) {
  double growth = 1.0;
  double running_min = std::numeric_limits<double>::infinity();
  for (const auto& s : summaries) {
    if (running_min > 0.0 && std::isfinite(running_min)) {
      growth = std::max(growth, s.stats.max / running_min);
    }
    running_min = std::min(running_min, s.stats.max);
  }
  return growth;
}

}  // namespace rmflab::harness
