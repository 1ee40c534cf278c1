#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmflab/errors.hpp"
#include "rmflab/expsum.hpp"
#include "rmflab/random.hpp"
#include "rmflab/variance.hpp"

using namespace rmflab;
using namespace rmflab::variance;
using ntcore::Exponent;

namespace {

const ntcore::PrimeTable& table() {
  static const auto t = ntcore::PrimeTable::build(1'000'000);
  return t;
}

}  // namespace

TEST_CASE("all-ones stub at theta = 0") {
  const std::uint64_t n = 1000;
  const auto ones = rmf::constant_stub(n);
  double expected = 0.0;
  for (std::uint32_t p : table().primes_between(ntcore::ceil_power(n, Exponent(4, 5)), n)) {
    const double len = static_cast<double>(n / p);
    expected += len * len;
  }
  expected /= n;
  CHECK(conditional_variance(ones, 0.0, upper_bound_spec(), table()) == doctest::Approx(expected));
  CHECK(rewrite_by_r(ones, 0.0, table()) == doctest::Approx(expected));
}

TEST_CASE("rewrite by r at N = 100 uses r in {1, 2}") {
  const auto ones = rmf::constant_stub(100);
  // primes in (50, 100] contribute 1, primes in [40, 50] contribute 4
  const double expected = (10 * 1.0 + 3 * 4.0) / 100.0;
  CHECK(rewrite_by_r(ones, 0.0, table()) == doctest::Approx(expected));
}

TEST_CASE("rewrite by r agrees with the direct variance") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::uint64_t seed = derive_seed(99, i, 0);
    const auto n = 20 + counter_draw(seed, 1, 0)[0] % 9981;
    const double theta = to_unit_interval(counter_draw(seed, 2, 0)[0]);
    const auto values = rmf::sample(rmf::RmfKind::Steinhaus, n, seed, table());
    const double direct = conditional_variance(values, theta, upper_bound_spec(), table());
    const double rewritten = rewrite_by_r(values, theta, table());
    REQUIRE(std::abs(direct - rewritten) <= 1e-10 * direct);
  }
  const auto v = rmf::sample(rmf::RmfKind::Steinhaus, 200, 5, table());
  CHECK(std::abs(conditional_variance(v, 1.0 / 3, upper_bound_spec(), table()) -
                 rewrite_by_r(v, 1.0 / 3, table())) < 1e-13);
}

TEST_CASE("variances are nonnegative and reject theta outside [0, 1)") {
  const auto v = rmf::sample(rmf::RmfKind::Rademacher, 3000, 1, table());
  for (double theta : {0.0, 0.2, 0.5, 0.9}) {
    CHECK(conditional_variance(v, theta, lower_bound_spec(rmf::RmfKind::Rademacher), table()) >= 0.0);
  }
  CHECK_THROWS_AS(conditional_variance(v, 1.0, upper_bound_spec(), table()), rmflab::DomainError);
  CHECK_THROWS_AS(rewrite_by_r(v, -0.1, table()), rmflab::DomainError);
}

TEST_CASE("diagonal of the Steinhaus variance") {
  // Steinhaus |f(m)| = 1, so the diagonal of |S_p|^2 is floor(N / p).
  const std::uint64_t n = 50000;
  const auto v = rmf::sample(rmf::RmfKind::Steinhaus, n, 8, table());
  double diagonal = 0.0;
  for (std::uint32_t p : table().primes_between(ntcore::ceil_power(n, Exponent(6, 7)), n)) {
    for (std::uint64_t m = 1; m <= n / p; ++m) diagonal += std::norm(v[m]);
  }
  CHECK(diagonal / (2.0 * n) == doctest::Approx(diagonal_term(n, rmf::RmfKind::Steinhaus, table())));

  const auto r = rmf::sample(rmf::RmfKind::Rademacher, n, 8, table());
  double r_diagonal = 0.0;
  for (std::uint32_t p : table().primes_between(ntcore::ceil_power(n, Exponent(6, 7)), n)) {
    for (std::uint64_t m = 1; m <= n / p; ++m) r_diagonal += std::norm(r[m]);
  }
  CHECK(r_diagonal / (2.0 * n) == doctest::Approx(diagonal_term(n, rmf::RmfKind::Rademacher, table())));
  CHECK(diagonal_term(10, rmf::RmfKind::Steinhaus, table()) == 0.0);
}

TEST_CASE("diagonal term approaches its Mertens main term slowly") {
  // the gap is the mean fractional part of N/p, of relative size O(1) at
  // N/p <= N^{1/7}; only the ordering is asserted here
  const double exact = diagonal_term(1'000'000, rmf::RmfKind::Steinhaus, table());
  const double main = diagonal_main_term(1'000'000, rmf::RmfKind::Steinhaus, table());
  CHECK(exact < main);
  CHECK(main == doctest::Approx(std::log(7.0 / 6.0) / 2).epsilon(0.02));
}

TEST_CASE("Steinhaus conditional variance is the variance over large primes") {
  const std::uint64_t n = 3000;
  const auto base = rmf::sample(rmf::RmfKind::Steinhaus, n, 31, table());
  const auto spec = lower_bound_spec(rmf::RmfKind::Steinhaus);
  const auto cutoff = ntcore::ceil_power(n, spec.pmin_exponent) - 1;
  const auto filter = expsum::CoefficientFilter::rough_at_least(spec.pmin_exponent);
  for (double theta : {0.137, 0.5, 0.81}) {
    const double expected = conditional_variance(base, theta, spec, table());
    double second_moment = 0.0;
    constexpr int kResamples = 2000;
    for (int i = 0; i < kResamples; ++i) {
      const auto v = rmf::resample_above_cutoff(base, cutoff, derive_seed(5, i, 0), table());
      const double re = expsum::eval_point(filter.apply(v, table()), theta).real();
      second_moment += re * re;
    }
    CHECK(second_moment / kResamples == doctest::Approx(expected).epsilon(0.15));
  }
}

TEST_CASE("Rademacher conditional variance is the variance over large primes") {
  const std::uint64_t n = 3000;
  const auto base = rmf::sample(rmf::RmfKind::Rademacher, n, 32, table());
  const auto spec = lower_bound_spec(rmf::RmfKind::Rademacher);
  const auto cutoff = ntcore::ceil_power(n, spec.pmin_exponent) - 1;
  const auto filter = expsum::CoefficientFilter::rough_at_least(spec.pmin_exponent);
  const double theta = 0.29;
  const double expected = conditional_variance(base, theta, spec, table());
  double second_moment = 0.0;
  constexpr int kResamples = 2000;
  for (int i = 0; i < kResamples; ++i) {
    const auto v = rmf::resample_above_cutoff(base, cutoff, derive_seed(6, i, 0), table());
    const double re = expsum::eval_point(filter.apply(v, table()), theta).real();
    second_moment += re * re;
  }
  CHECK(second_moment / kResamples == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("covariance") {
  const std::uint64_t n = 400;
  const auto ones = rmf::constant_stub(n);
  const auto spec = lower_bound_spec(rmf::RmfKind::Steinhaus);
  double expected = 0.0;
  for (std::uint32_t p : table().primes_between(ntcore::ceil_power(n, spec.pmin_exponent), n)) {
    for (std::uint64_t m1 = 1; m1 <= n / p; ++m1) {
      for (std::uint64_t m2 = 1; m2 <= n / p; ++m2) {
        // e(p (m1 * 0 - m2 / 2)) = (-1)^{p m2}
        expected += ((p * m2) % 2 == 0) ? 1.0 : -1.0;
      }
    }
  }
  expected /= 2.0 * n;
  CHECK(covariance_z(ones, 0.0, 0.5, spec, table()) == doctest::Approx(expected));
  CHECK_THROWS_AS(covariance_z(ones, 0.3, 0.3, spec, table()), rmflab::DomainError);

  const auto v = rmf::sample(rmf::RmfKind::Steinhaus, 5000, 4, table());
  const double a = covariance_z(v, 0.1, 0.7, spec, table());
  const double b = covariance_z(v, 0.7, 0.1, spec, table());
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("maximum over a point set") {
  const std::uint64_t n = 2048;
  const auto v = rmf::sample(rmf::RmfKind::Steinhaus, n, 12, table());
  const auto points = expsum::build_discretization(n, expsum::default_denominator_bound(n));
  const auto spec = upper_bound_spec();

  const std::vector<expsum::DiscretizationPoint> single{points[17]};
  const auto one = max_variance_over_d(v, single, spec, std::nullopt, 0, table());
  CHECK(one.value == rewrite_by_r(v, points[17].theta, table()));
  CHECK(one.theta_star == points[17].theta);

  const auto full = max_variance_over_d(v, points, spec, std::nullopt, 0, table());
  CHECK(full.evaluated == points.size());
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto half = max_variance_over_d(v, points, spec, points.size() / 2, s, table());
    CHECK(half.evaluated == points.size() / 2);
    CHECK(full.value >= half.value);
  }
  const auto threaded = max_variance_over_d(v, points, spec, 3000, 1, table(), 4);
  const auto serial = max_variance_over_d(v, points, spec, 3000, 1, table(), 1);
  CHECK(threaded.value == serial.value);
  CHECK(threaded.theta_star == serial.theta_star);
}
