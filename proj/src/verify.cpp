#include "rmflab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rmflab/estimates.hpp"
#include "rmflab/expsum.hpp"
#include "rmflab/harness.hpp"
#include "rmflab/random.hpp"
#include "rmflab/variance.hpp"

namespace rmflab::harness {

namespace {

using estimates::BoundReport;

class Check {
 public:
  explicit Check(std::string name) { result_.name = std::move(name); }

  void record(bool ok, const std::string& context, double ratio = 0.0) {
    ++result_.cases;
    result_.max_ratio = std::max(result_.max_ratio, ratio);
    if (!ok) {
      if (result_.failures == 0) result_.detail = context;
      ++result_.failures;
    }
  }
  void record(const BoundReport& report, const std::string& context) {
    std::ostringstream s;
    s << context << " lhs=" << report.lhs << " rhs=" << report.rhs;
    record(report.holds, s.str(), report.ratio);
  }

  CheckResult finish() {
    result_.passed = result_.cases > 0 && result_.failures == 0;
    return std::move(result_);
  }

 private:
  CheckResult result_;
};

double draw_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return to_unit_interval(counter_draw(seed, a, b)[0]);
}

CheckResult check_tau(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  // tau_k = tau_{k-1} * 1 by Dirichlet convolution over a table.
  constexpr std::uint64_t kLimit = 3000;
  Check check("divisor_tau_k");
  std::vector<std::uint64_t> previous(kLimit + 1, 1);
  for (std::uint32_t k = 1; k <= 5; ++k) {
    if (k > 1) {
      std::vector<std::uint64_t> next(kLimit + 1, 0);
      for (std::uint64_t d = 1; d <= kLimit; ++d) {
        for (std::uint64_t m = d; m <= kLimit; m += d) next[m] += previous[d];
      }
      previous = std::move(next);
    }
    for (std::uint64_t n = 1; n <= kLimit; ++n) {
      const auto got = options.tau(n, k, table);
      check.record(got == previous[n], "tau_" + std::to_string(k) + "(" + std::to_string(n) +
                                           ")=" + std::to_string(got) +
                                           " expected " + std::to_string(previous[n]));
    }
  }
  return check.finish();
}

CheckResult check_phi(const ntcore::PrimeTable& table) {
  Check check("euler_phi");
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t b = 1; b <= n; ++b) count += std::gcd(b, n) == 1;
    check.record(ntcore::euler_phi(n, table) == count, "phi(" + std::to_string(n) + ")");
  }
  return check.finish();
}

CheckResult check_prime_count(const ntcore::PrimeTable& table) {
  Check check("prime_count_1e6");
  check.record(table.prime_count(1'000'000) == 78498, "pi(10^6)");
  check.record(table.prime_count(100) == 25, "pi(100)");
  return check.finish();
}

CheckResult check_ramanujan() {
  Check check("ramanujan_gcd_bound");
  for (std::uint64_t q = 1; q <= 200; ++q) {
    for (std::int64_t n = -200; n <= 200; ++n) {
      const double bound = static_cast<double>(std::gcd(static_cast<std::uint64_t>(std::llabs(n)), q));
      const double value = std::abs(ntcore::ramanujan_sum_direct(q, n));
      check.record(value <= bound + 1e-9 * q,
                   "q=" + std::to_string(q) + " n=" + std::to_string(n), value / bound);
    }
  }
  return check.finish();
}

CheckResult check_brun_titchmarsh(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  Check check("brun_titchmarsh");
  const std::uint64_t seed = derive_seed(options.seed, 0xB7, 0);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto q = 1 + static_cast<std::uint64_t>(200 * draw_uniform(seed, i, 0));
    const double y_min = 2.0 * static_cast<double>(q);
    const double y = y_min * std::pow(1e5 / y_min, draw_uniform(seed, i, 1));
    const double x = 3.0 + (1e6 - y - 3.0) * draw_uniform(seed, i, 2);
    auto a = static_cast<std::int64_t>(q * draw_uniform(seed, i, 3));
    while (std::gcd(static_cast<std::uint64_t>(a), q) != 1) ++a;
    check.record(estimates::brun_titchmarsh_report(x, y, q, a, table),
                 "q=" + std::to_string(q));
  }
  return check.finish();
}

CheckResult check_geometric(const VerifyOptions& options) {
  Check check("geometric_sum");
  const std::uint64_t seed = derive_seed(options.seed, 0x6E, 0);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto length = 1 + static_cast<std::uint64_t>(1000 * draw_uniform(seed, i, 0));
    const double alpha = 2.0 * draw_uniform(seed, i, 1) - 1.0;
    check.record(estimates::geometric_sum_report(length, alpha), "L=" + std::to_string(length));
  }
  for (std::uint64_t length : {1u, 7u, 10u, 1000u}) {
    for (double alpha : {0.0, 0.5, 1.0, -3.0, 0.25}) {
      check.record(estimates::geometric_sum_report(length, alpha), "L=" + std::to_string(length));
    }
  }
  return check.finish();
}

CheckResult check_davenport(const ntcore::PrimeTable& table) {
  Check check("davenport_ratio");
  constexpr std::uint64_t kN = 100'000;
  for (std::uint64_t q : {1u, 2u, 3u, 10u, 97u, 316u, 317u, 1000u, 10007u}) {
    for (std::int64_t a : {1, 3, 7}) {
      if (std::gcd(static_cast<std::uint64_t>(a), q) != 1 || static_cast<std::uint64_t>(a) > q) continue;
      check.record(estimates::davenport_report(kN, a, q, table),
                   "a/q=" + std::to_string(a) + "/" + std::to_string(q));
    }
  }
  return check.finish();
}

CheckResult check_vdc(const VerifyOptions& options) {
  Check check("van_der_corput_ratio");
  const std::uint64_t seed = derive_seed(options.seed, 0x7D, 0);
  std::uint64_t i = 0;
  for (std::uint64_t m : {100u, 1000u, 10000u, 100000u}) {
    const double md = static_cast<double>(m);
    for (int s = 0; s < 8; ++s, ++i) {
      const double log_theta = std::log(md) * (1.0 + 2.0 * draw_uniform(seed, i, 0));
      check.record(estimates::vdc_report(m, m, std::exp(log_theta)), "M=" + std::to_string(m));
    }
  }
  return check.finish();
}

CheckResult check_moments(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  Check check("moment_bound");
  const std::uint64_t seed = derive_seed(options.seed, 0x30, 0);
  for (std::uint64_t n : {100u, 1000u}) {
    std::vector<std::complex<double>> coeffs(n + 1, 0.0);
    for (std::uint64_t i = 1; i <= n; ++i) {
      const auto z = counter_normal_pair(seed, n, i);
      coeffs[i] = {z[0], z[1]};
    }
    for (const auto kind : {rmf::RmfKind::Rademacher, rmf::RmfKind::Steinhaus}) {
      for (double k : {1.0, 2.0, 3.0}) {
        check.record(estimates::moment_bound_check(coeffs, k, kind, options.moment_trials,
                                                   derive_seed(seed, n, static_cast<std::uint64_t>(k)),
                                                   table),
                     std::string(rmf::to_string(kind)) + " N=" + std::to_string(n) +
                         " k=" + std::to_string(static_cast<int>(k)));
      }
    }
  }
  return check.finish();
}

CheckResult check_quadruples() {
  Check check("quadruple_parametrization");
  for (std::uint64_t r = 1; r <= 64; ++r) {
    for (const auto pairing : {estimates::Pairing::M1M4EqM2M3, estimates::Pairing::M1M3EqM2M4}) {
      check.record(estimates::quadruple_count(r, pairing) == estimates::quadruple_count_vw(r, pairing),
                   "r=" + std::to_string(r));
    }
  }
  return check.finish();
}

CheckResult check_orthogonality(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  Check check("orthogonality");
  for (std::uint64_t r : {2u, 8u, 16u}) {
    check.record(estimates::orthogonality_mc(r, options.orthogonality_trials,
                                             derive_seed(options.seed, 0x0F, r), table),
                 "r=" + std::to_string(r));
  }
  return check.finish();
}

CheckResult check_fft(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  Check check("fft_vs_direct");
  for (std::uint64_t n : {10u, 257u, 1000u, 4096u}) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto values = rmf::sample(s % 2 ? rmf::RmfKind::Rademacher : rmf::RmfKind::Steinhaus, n,
                                      derive_seed(options.seed, n, s), table);
      const auto grid = expsum::eval_grid_fft(values.values, 2 * n + 1);
      double worst = 0.0;
      const std::size_t stride = std::max<std::size_t>(1, grid.size / 64);
      for (std::size_t j = 0; j < grid.size; j += stride) {
        const double theta = static_cast<double>(j) / static_cast<double>(grid.size);
        worst = std::max(worst, std::abs(grid.values[j] - expsum::eval_point(values.values, theta)));
      }
      check.record(worst < 1e-9, "N=" + std::to_string(n) + " err=" + std::to_string(worst));
    }
  }
  return check.finish();
}

CheckResult check_parseval(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  Check check("parseval");
  for (std::uint64_t n : {100u, 4096u, 10000u}) {
    const auto values = rmf::sample(rmf::RmfKind::Rademacher, n, derive_seed(options.seed, 0x9A, n), table);
    const auto grid = expsum::eval_grid_fft(values.values, n + 1);
    double energy = 0.0;
    for (const auto& v : grid.values) energy += std::norm(v);
    energy /= static_cast<double>(grid.size);
    double mass = 0.0;
    for (std::uint64_t i = 1; i <= n; ++i) mass += std::norm(values.values[i]);
    mass /= static_cast<double>(n);
    check.record(std::abs(energy - mass) <= 1e-8 * mass, "N=" + std::to_string(n));
  }
  return check.finish();
}

CheckResult check_variance_rewrite(const VerifyOptions& options, const ntcore::PrimeTable& table) {
  Check check("variance_rewrite");
  const auto spec = variance::upper_bound_spec();
  for (std::uint64_t i = 0; i < 10; ++i) {
    const std::uint64_t seed = derive_seed(options.seed, 0x52, i);
    const auto n = 50 + static_cast<std::uint64_t>(9950 * draw_uniform(seed, 0, 0));
    const double theta = draw_uniform(seed, 0, 1);
    const auto values = rmf::sample(rmf::RmfKind::Steinhaus, n, seed, table);
    const double direct = variance::conditional_variance(values, theta, spec, table);
    const double rewritten = variance::rewrite_by_r(values, theta, table);
    check.record(std::abs(direct - rewritten) <= 1e-10 * std::max(1.0, std::abs(direct)),
                 "N=" + std::to_string(n));
  }
  return check.finish();
}

CheckResult check_seed_collisions(const VerifyOptions& options) {
  Check check("seed_collisions");
  std::set<std::uint64_t> seen;
  std::uint64_t collisions = 0;
  for (const auto n : geometric_n_values(1024, 1u << 20, 2.0)) {
    for (std::uint64_t t = 0; t < 1000; ++t) collisions += !seen.insert(trial_seed(options.seed, n, t)).second;
  }
  check.record(collisions == 0, std::to_string(collisions) + " collisions");
  return check.finish();
}

}  // namespace

bool VerifyReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(const VerifyOptions& options) {
  const auto table = ntcore::PrimeTable::build(1'000'000);
  VerifyReport report;
  report.checks.push_back(check_tau(options, table));
  report.checks.push_back(check_phi(table));
  report.checks.push_back(check_prime_count(table));
  report.checks.push_back(check_ramanujan());
  report.checks.push_back(check_brun_titchmarsh(options, table));
  report.checks.push_back(check_geometric(options));
  report.checks.push_back(check_davenport(table));
  report.checks.push_back(check_vdc(options));
  report.checks.push_back(check_moments(options, table));
  report.checks.push_back(check_quadruples());
  report.checks.push_back(check_orthogonality(options, table));
  report.checks.push_back(check_fft(options, table));
  report.checks.push_back(check_parseval(options, table));
  report.checks.push_back(check_variance_rewrite(options, table));
  report.checks.push_back(check_seed_collisions(options));
  return report;
}

void write_verify_json(std::ostream& out, const VerifyReport& report) {
  nlohmann::ordered_json doc;
  doc["passed"] = report.passed();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"cases", c.cases},
                      {"failures", c.failures},
                      {"max_ratio", c.max_ratio},
                      {"detail", c.detail}});
  }
  doc["checks"] = std::move(checks);
  out << doc.dump(2) << '\n';
}

}  // namespace rmflab::harness
