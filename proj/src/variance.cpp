#include "rmflab/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>
#include <vector>

#include "rmflab/errors.hpp"
#include "rmflab/parallel.hpp"
#include "rmflab/random.hpp"
#include "rmflab/summation.hpp"

namespace rmflab::variance {

namespace {

void check_theta(double theta, const char* what) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw DomainError(std::string(what) + ": theta must lie in [0, 1)");
  }
}

double norm_factor(Normalization norm, std::uint64_t n) {
  return norm == Normalization::Half ? 0.5 / static_cast<double>(n) : 1.0 / static_cast<double>(n);
}

// S_p(theta) with every phase taken directly from m p theta.
std::complex<double> inner_sum_direct(const rmf::RmfValues& values, std::uint32_t p, double theta) {
  const std::uint64_t len = values.n / p;
  std::complex<double> s = 0.0;
  for (std::uint64_t m = 1; m <= len; ++m) {
    s += values[m] * unit_phase(static_cast<long long>(m * p), theta);
  }
  return s;
}

double weight(RmfKind kind, std::complex<double> s) {
  return kind == RmfKind::Steinhaus ? std::norm(s) : s.real() * s.real();
}

}  // namespace

VarianceSpec lower_bound_spec(RmfKind kind) {
  return {Exponent(6, 7), kind == RmfKind::Steinhaus ? Normalization::Half : Normalization::Full,
          kind};
}

VarianceSpec upper_bound_spec() { return {Exponent(4, 5), Normalization::Full, RmfKind::Steinhaus}; }

double conditional_variance(const rmf::RmfValues& values, double theta, const VarianceSpec& spec,
                            const ntcore::PrimeTable& table) {
  check_theta(theta, "conditional_variance");
  const std::uint64_t n = values.n;
  table.check_range(n, "conditional_variance");
  CompensatedSum acc;
  for (const std::uint32_t p : table.primes_between(ntcore::ceil_power(n, spec.pmin_exponent), n)) {
    acc += weight(spec.kind, inner_sum_direct(values, p, theta));
  }
  return acc.value() * norm_factor(spec.normalization, n);
}

double rewrite_by_r(const rmf::RmfValues& values, double theta, const ntcore::PrimeTable& table,
                    Exponent alpha) {
  check_theta(theta, "rewrite_by_r");
  const std::uint64_t n = values.n;
  table.check_range(n, "rewrite_by_r");
  const std::uint64_t p_min = ntcore::ceil_power(n, alpha);
  const std::uint64_t r_max = n / p_min;
  CompensatedSum acc;
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    const std::uint64_t lo = std::max(n / (r + 1) + 1, p_min);
    for (const std::uint32_t p : table.primes_between(lo, n / r)) {
      const std::complex<double> step = unit_phase(static_cast<long long>(p), theta);
      std::complex<double> phase = step;
      std::complex<double> inner = values[1] * phase;
      for (std::uint64_t m = 2; m <= r; ++m) {
        phase *= step;
        inner += values[m] * phase;
      }
      acc += std::norm(inner);
    }
  }
  return acc.value() / static_cast<double>(n);
}

double covariance_z(const rmf::RmfValues& values, double theta1, double theta2,
                    const VarianceSpec& spec, const ntcore::PrimeTable& table) {
  check_theta(theta1, "covariance_z");
  check_theta(theta2, "covariance_z");
  if (theta1 == theta2) {
    throw DomainError("covariance_z: theta1 == theta2; use conditional_variance");
  }
  const std::uint64_t n = values.n;
  table.check_range(n, "covariance_z");
  CompensatedSum acc;
  for (const std::uint32_t p : table.primes_between(ntcore::ceil_power(n, spec.pmin_exponent), n)) {
    const auto s1 = inner_sum_direct(values, p, theta1);
    const auto s2 = inner_sum_direct(values, p, theta2);
    acc += spec.kind == RmfKind::Steinhaus ? (s1 * std::conj(s2)).real() : s1.real() * s2.real();
  }
  return acc.value() * norm_factor(spec.normalization, n);
}

double diagonal_term(std::uint64_t n, RmfKind kind, const ntcore::PrimeTable& table) {
  if (n < 2) throw DomainError("diagonal_term: N must be >= 2");
  table.check_range(n, "diagonal_term");
  const auto primes = table.primes_between(ntcore::floor_power(n, Exponent(6, 7)) + 1, n);
  if (primes.empty()) return 0.0;

  // D(x) for every x that occurs, i.e. x <= N / smallest prime.
  const std::uint64_t x_max = n / primes.front();
  std::vector<std::uint64_t> count(x_max + 1, 0);
  for (std::uint64_t m = 1; m <= x_max; ++m) {
    const bool counted = kind == RmfKind::Steinhaus || ntcore::is_squarefree(m, table);
    count[m] = count[m - 1] + (counted ? 1 : 0);
  }
  std::uint64_t total = 0;
  for (const std::uint32_t p : primes) total += count[n / p];
  return 0.5 * static_cast<double>(total) / static_cast<double>(n);
}

double diagonal_main_term(std::uint64_t n, RmfKind kind, const ntcore::PrimeTable& table) {
  const double tail = ntcore::mertens_tail(n, Exponent(6, 7), table);
  return kind == RmfKind::Steinhaus ? 0.5 * tail : 3.0 / (std::numbers::pi * std::numbers::pi) * tail;
}

VarianceMax max_variance_over_d(const rmf::RmfValues& values,
                                std::span<const expsum::DiscretizationPoint> points,
                                const VarianceSpec& spec, std::optional<std::size_t> subsample,
                                std::uint64_t seed, const ntcore::PrimeTable& table,
                                unsigned threads) {
  if (points.empty()) throw DomainError("max_variance_over_d: empty point set");

  std::vector<std::size_t> chosen;
  if (subsample && *subsample < points.size()) {
    // Floyd's algorithm over indices, then sorted for a fixed visiting order.
    CounterEngine engine(seed, 0x5AB5'A3B1ull);
    std::unordered_set<std::size_t> picked;
    for (std::size_t j = points.size() - *subsample; j < points.size(); ++j) {
      const auto t = static_cast<std::size_t>(uniform_below(engine, j + 1));
      if (!picked.insert(t).second) picked.insert(j);
    }
    chosen.assign(picked.begin(), picked.end());
    std::sort(chosen.begin(), chosen.end());
  } else {
    chosen.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) chosen[i] = i;
  }

  const bool use_rewrite = spec.kind == RmfKind::Steinhaus &&
                           spec.normalization == Normalization::Full &&
                           spec.pmin_exponent.value() > 0.5;
  std::vector<double> results(chosen.size());
  parallel_for(chosen.size(), threads, [&](std::size_t i) {
    const double theta = points[chosen[i]].theta;
    results[i] = use_rewrite ? rewrite_by_r(values, theta, table, spec.pmin_exponent)
                             : conditional_variance(values, theta, spec, table);
  });

  VarianceMax best;
  best.available = points.size();
  best.evaluated = chosen.size();
  best.value = -1.0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const auto& pt = points[chosen[i]];
    if (results[i] > best.value || (results[i] == best.value && pt.theta < best.theta_star)) {
      best.value = results[i];
      best.theta_star = pt.theta;
      best.point = pt;
    }
  }
  return best;
}

}  // namespace rmflab::variance
