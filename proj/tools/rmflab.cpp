#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rmflab/errors.hpp"
#include "rmflab/harness.hpp"
#include "rmflab/report_io.hpp"
#include "rmflab/verify.hpp"

namespace h = rmflab::harness;

namespace {

struct Sweep {
  std::string kind = "steinhaus";
  std::uint64_t n_min = 1024;
  std::uint64_t n_max = 1024;
  double n_step_factor = 2.0;
  std::uint64_t trials = 10;
  double epsilon = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t subsample = 0;
  std::string out;
  unsigned threads = 0;
  std::string format = "csv";
  bool baseline = false;
  bool smooth_diagnostic = false;
};

void add_common(CLI::App* app, Sweep& s) {
  app->add_option("--kind", s.kind, "rademacher or steinhaus")
      ->check(CLI::IsMember({"rademacher", "steinhaus"}));
  app->add_option("--n-min", s.n_min, "smallest N");
  app->add_option("--n-max", s.n_max, "largest N");
  app->add_option("--n-step-factor", s.n_step_factor, "geometric step between N values");
  app->add_option("--trials", s.trials, "trials per N (clt: number of theta draws)");
  app->add_option("--seed", s.seed, "master seed");
  app->add_option("--out", s.out, "output file (stdout when omitted)");
  app->add_option("--threads", s.threads, "worker threads (default RMFLAB_THREADS or all cores)");
  app->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

h::ExperimentConfig to_config(const Sweep& s, h::Experiment experiment) {
  h::ExperimentConfig config;
  config.experiment = experiment;
  config.kind = rmflab::rmf::parse_kind(s.kind);
  config.n_values = h::geometric_n_values(s.n_min, s.n_max, s.n_step_factor);
  config.trials = s.trials;
  config.epsilon = s.epsilon;
  config.master_seed = s.seed;
  if (s.subsample > 0) config.subsample = s.subsample;
  config.output_path = s.out;
  config.threads = s.threads;
  config.format = s.format == "json" ? h::OutputFormat::Json : h::OutputFormat::Csv;
  config.salem_zygmund_baseline = s.baseline;
  config.smooth_part_diagnostic = s.smooth_diagnostic;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on random multiplicative functions"};
  app.require_subcommand(1);

  Sweep sweep;
  auto* lower = app.add_subcommand("lowerbound", "max |P_N| / sqrt(log N) over [0, 1]");
  auto* upper = app.add_subcommand("upperbound", "normalized rough-part maximum over the discretization set");
  auto* clt = app.add_subcommand("clt", "KS distance of sqrt(2) Re P_N(Theta) from the standard normal");
  auto* varmax = app.add_subcommand("variancemax", "normalized conditional-variance maximum");
  for (auto* sub : {lower, upper, clt, varmax}) add_common(sub, sweep);
  for (auto* sub : {upper, varmax}) {
    sub->add_option("--epsilon", sweep.epsilon, "exponent slack in the log normalization");
    sub->add_option("--subsample", sweep.subsample, "evaluate a uniform subsample of this many points");
  }
  lower->add_flag("--salem-zygmund", sweep.baseline, "also record iid +-1 coefficient maxima");
  lower->add_flag("--smooth-diagnostic", sweep.smooth_diagnostic,
                  "also record the fraction of theta in A with a small smooth part");

  std::uint64_t gauss_n = 100000;
  double gauss_eps = 1e-3;
  double gauss_delta = 0.1;
  auto* gauss = app.add_subcommand("gaussmax", "maximum of equicorrelated standard normals");
  gauss->add_option("--n", gauss_n, "number of normals");
  gauss->add_option("--epsilon", gauss_eps, "pairwise correlation");
  gauss->add_option("--delta", gauss_delta, "threshold sqrt((2 - delta) log n)");
  gauss->add_option("--trials", sweep.trials, "Monte Carlo trials");
  gauss->add_option("--seed", sweep.seed, "master seed");
  gauss->add_option("--out", sweep.out, "output file (stdout when omitted)");
  gauss->add_option("--threads", sweep.threads, "worker threads");
  gauss->add_option("--format", sweep.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::uint64_t verify_seed = h::VerifyOptions{}.seed;
  auto* verify = app.add_subcommand("verify", "run every bound sweep and invariant; JSON report");
  verify->add_option("--seed", verify_seed, "seed for randomized sweeps");
  verify->add_option("--out", sweep.out, "report file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      h::VerifyOptions options;
      options.seed = verify_seed;
      const auto report = h::run_verify(options);
      if (sweep.out.empty() || sweep.out == "-") {
        h::write_verify_json(std::cout, report);
      } else {
        std::ofstream out(sweep.out, std::ios::binary | std::ios::trunc);
        h::write_verify_json(out, report);
      }
      for (const auto& c : report.checks) {
        std::cerr << (c.passed ? "ok   " : "FAIL ") << c.name << " (" << c.cases << " cases)\n";
      }
      return report.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
    }
    if (gauss->parsed()) {
      const auto result =
          h::run_gauss_max(gauss_n, gauss_eps, gauss_delta, sweep.trials, sweep.seed, sweep.threads);
      h::write_records(sweep.out, sweep.format == "json" ? h::OutputFormat::Json : h::OutputFormat::Csv,
                       h::Experiment::GaussMax, result.records);
      std::cerr << "P(max <= sqrt((2 - delta) log n)) = " << result.probability << " +- "
                << result.stderr_probability
                << (result.in_comparison_window ? "" : " (delta outside [100 eps, 1/100])") << '\n';
      return EXIT_SUCCESS;
    }
    h::Experiment experiment = h::Experiment::LowerBound;
    if (upper->parsed()) experiment = h::Experiment::UpperBound;
    if (clt->parsed()) experiment = h::Experiment::Clt;
    if (varmax->parsed()) experiment = h::Experiment::VarianceMax;
    const auto config = to_config(sweep, experiment);
    const auto records = h::run_experiment(config);
    h::write_records(config.output_path, config.format, experiment, records);

    const auto statistic = h::primary_statistic(experiment);
    const double threshold =
        experiment == h::Experiment::LowerBound ? h::lower_bound_constant(config.kind) : 0.05;
    for (const auto& s : h::summarize_by_n(records, statistic, threshold)) {
      std::cerr << "N=" << s.n << " count=" << s.stats.count << " mean=" << s.stats.mean
                << " max=" << s.stats.max << " frac>=" << threshold << ": "
                << s.stats.fraction_at_or_above << '\n';
    }
  } catch (const rmflab::UnsupportedModelError& e) {
    std::cerr << "unsupported model: " << e.what() << '\n';
    return 3;
  } catch (const rmflab::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return EXIT_SUCCESS;
}
