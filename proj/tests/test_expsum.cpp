#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

#include "rmflab/errors.hpp"
#include "rmflab/expsum.hpp"
#include "rmflab/random.hpp"

using namespace rmflab;
using expsum::CoefficientFilter;
using ntcore::Exponent;
using rmf::RmfKind;

namespace {

const ntcore::PrimeTable& table() {
  static const auto t = ntcore::PrimeTable::build(1'000'000);
  return t;
}

// Quadratic-time DFT in long double with exactly reduced phases.
std::complex<double> direct_dft(std::span<const std::complex<double>> a, std::size_t j, std::size_t m) {
  long double re = 0.0L, im = 0.0L;
  for (std::size_t n = 1; n < a.size(); ++n) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>((n * j) % m) / static_cast<long double>(m);
    re += a[n].real() * std::cos(angle) - a[n].imag() * std::sin(angle);
    im += a[n].real() * std::sin(angle) + a[n].imag() * std::cos(angle);
  }
  const long double scale = std::sqrt(static_cast<long double>(a.size() - 1));
  return {static_cast<double>(re / scale), static_cast<double>(im / scale)};
}

double circle_distance(double x, double y) {
  const double d = std::abs(x - y);
  return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("point evaluation identities") {
  const auto ones = rmf::constant_stub(1000);
  CHECK(std::abs(expsum::eval_point(ones.values, 0.0) - std::sqrt(1000.0)) < 1e-12);
  const auto s = rmf::sample(RmfKind::Steinhaus, 3000, 2, table());
  for (double theta : {0.0, 0.1, 0.37, 0.5, 0.999}) {
    CHECK(std::abs(expsum::eval_point(s.values, theta)) <= std::sqrt(3000.0) + 1e-9);
  }
  // conj symmetry for real coefficients
  const auto r = rmf::sample(RmfKind::Rademacher, 3000, 2, table());
  CHECK(std::abs(expsum::eval_point(r.values, 0.3) - std::conj(expsum::eval_point(r.values, 0.7))) < 1e-10);
}

TEST_CASE("grid matches the direct DFT") {
  const auto ones = rmf::constant_stub(8);
  const auto tiny = expsum::eval_grid_fft(ones.values, 16);
  CHECK(tiny.size == 16);
  CHECK(std::abs(tiny.values[0] - std::sqrt(8.0)) < 1e-12);

  for (std::uint64_t n : {1u, 17u, 1024u, 4096u}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto s = rmf::sample(RmfKind::Steinhaus, std::max<std::uint64_t>(n, 2), seed, table());
      const auto grid = expsum::eval_grid_fft(s.values, 2 * s.n + 3);
      double worst = 0.0;
      for (std::size_t j = 0; j < grid.size; j += std::max<std::size_t>(1, grid.size / 97)) {
        worst = std::max(worst, std::abs(grid.values[j] - direct_dft(s.values, j, grid.size)));
      }
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("grid point equals point evaluation at theta = j / M") {
  const auto s = rmf::sample(RmfKind::Steinhaus, 1024, 77, table());
  const auto grid = expsum::eval_grid_fft(s.values, 4096);
  const auto j = static_cast<std::size_t>(std::llround(0.37 * grid.size));
  const double theta = static_cast<double>(j) / grid.size;
  CHECK(std::abs(grid.values[j] - expsum::eval_point(s.values, theta)) < 1e-9);
}

TEST_CASE("grid parseval") {
  const auto s = rmf::sample(RmfKind::Rademacher, 5000, 3, table());
  const auto grid = expsum::eval_grid_fft(s.values, 5001);
  double energy = 0.0;
  for (const auto& v : grid.values) energy += std::norm(v);
  double mass = 0.0;
  for (std::size_t n = 1; n < s.values.size(); ++n) mass += std::norm(s.values[n]);
  CHECK(energy / grid.size == doctest::Approx(mass / 5000.0).epsilon(1e-10));
}

TEST_CASE("grid size contract") {
  const auto s = rmf::sample(RmfKind::Steinhaus, 100, 1, table());
  CHECK_THROWS_AS(expsum::eval_grid_fft(s.values, 100), rmflab::DomainError);
  CHECK(expsum::next_admissible_size(1) == 1);
  CHECK(expsum::next_admissible_size(11) == 12);
  CHECK(expsum::next_admissible_size(4097) == 4116);
  for (std::size_t m = 1; m < 3000; ++m) {
    auto v = expsum::next_admissible_size(m);
    REQUIRE(v >= m);
    for (std::size_t p : {2, 3, 5, 7}) {
      while (v % p == 0) v /= p;
    }
    REQUIRE(v == 1);
  }
}

TEST_CASE("rough filter at N = 100 keeps n with P(n) >= 40") {
  const auto s = rmf::sample(RmfKind::Steinhaus, 100, 5, table());
  const auto filter = CoefficientFilter::rough_at_least(Exponent(4, 5));
  const auto kept = filter.apply(s, table());
  std::vector<std::uint32_t> support;
  for (std::uint32_t n = 1; n <= 100; ++n) {
    if (kept[n] != 0.0) support.push_back(n);
  }
  // the 13 primes in [40, 100] and the multiples 2 * 41, 2 * 43, 2 * 47
  CHECK(support ==
        std::vector<std::uint32_t>{41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 82, 83, 86, 89, 94, 97});
}

TEST_CASE("rough and smooth filters partition the range") {
  const auto s = rmf::sample(RmfKind::Steinhaus, 4096, 5, table());
  const auto rough = CoefficientFilter::rough_at_least(Exponent(6, 7)).apply(s, table());
  const auto smooth = CoefficientFilter::smooth_at_most(Exponent(6, 7)).apply(s, table());
  for (std::size_t n = 1; n <= 4096; ++n) REQUIRE(rough[n] + smooth[n] == s.values[n]);
  // N = 128, alpha = 1/7 puts P(n) = 2 exactly at the threshold: rough side
  const auto t = rmf::sample(RmfKind::Steinhaus, 128, 1, table());
  CHECK(CoefficientFilter::rough_at_least(Exponent(1, 7)).keeps(64, 128, table()));
  CHECK_FALSE(CoefficientFilter::smooth_at_most(Exponent(1, 7)).keeps(64, 128, table()));
  CHECK(CoefficientFilter::smooth_at_most(Exponent(1, 7)).keeps(1, 128, table()));
  (void)t;
}

TEST_CASE("rough support density") {
  constexpr std::uint64_t kN = 1'000'000;
  const auto filter = CoefficientFilter::rough_at_least(Exponent(4, 5));
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= kN; ++n) count += filter.keeps(n, kN, table());
  // every rough n is p m with a unique prime p >= N^{4/5}
  std::uint64_t by_primes = 0;
  double reciprocal = 0.0;
  for (std::uint32_t p : table().primes_between(ntcore::ceil_power(kN, Exponent(4, 5)), kN)) {
    by_primes += kN / p;
    reciprocal += 1.0 / p;
  }
  CHECK(count == by_primes);
  CHECK(reciprocal == doctest::Approx(std::log(1.25)).epsilon(0.01));
  // floor(N / p) drops a mean fractional part near 1/2 per prime, which keeps
  // the density about 14% under log(5/4) at this N
  const double density = static_cast<double>(count) / kN;
  MESSAGE("rough density " << density << " vs log(5/4) " << std::log(1.25));
  CHECK(density == doctest::Approx(std::log(1.25)).epsilon(0.2));
}

TEST_CASE("max modulus") {
  const auto ones = rmf::constant_stub(300);
  const auto m = expsum::max_modulus(ones.values);
  CHECK(m.theta_star == 0.0);
  CHECK(m.magnitude == doctest::Approx(std::sqrt(300.0)));

  for (std::uint64_t n : {16u, 100u, 333u, 512u}) {
    const auto s = rmf::sample(RmfKind::Steinhaus, n, n, table());
    const auto grid_max = expsum::max_modulus(s.values);
    // 64x oversampled reference scan
    const auto fine = expsum::eval_grid_fft(s.values, 64 * (n + 1));
    double reference = 0.0;
    for (const auto& v : fine.values) reference = std::max(reference, std::abs(v));
    CHECK(grid_max.magnitude >= reference / 2.0);
    CHECK(grid_max.magnitude <= std::sqrt(static_cast<double>(n)) + 1e-9);
    CHECK(std::abs(std::abs(expsum::eval_point(s.values, grid_max.theta_star)) - grid_max.magnitude) < 1e-9);
  }
}

TEST_CASE("discretization set small example") {
  const auto points = expsum::build_discretization(4, 2.0);
  auto has = [&](std::uint32_t a, std::uint32_t q, std::int64_t j) {
    return std::any_of(points.begin(), points.end(), [&](const auto& p) {
      return std::abs(circle_distance(p.theta, expsum::discretization_theta(a, q, j, 4))) < 1e-12;
    });
  };
  const auto bound_q1 = static_cast<std::int64_t>(8 * std::numbers::pi);
  const auto bound_q2 = static_cast<std::int64_t>(4 * std::numbers::pi);
  for (std::int64_t j = -bound_q1; j <= bound_q1; ++j) CHECK(has(1, 1, j));
  for (std::int64_t j = -bound_q2; j <= bound_q2; ++j) CHECK(has(1, 2, j));
  for (std::size_t i = 1; i < points.size(); ++i) CHECK(points[i - 1].theta < points[i].theta);
  CHECK(expsum::discretization_size(4, 2.0) == (2 * bound_q1 + 1) + (2 * bound_q2 + 1));
}

TEST_CASE("discretization set covers the circle at spacing 1/(4 pi N)") {
  for (std::uint64_t n : {50u, 1000u}) {
    const auto points = expsum::build_discretization(n, expsum::default_denominator_bound(n));
    std::vector<double> thetas;
    for (const auto& p : points) {
      REQUIRE(p.theta >= 0.0);
      REQUIRE(p.theta < 1.0);
      REQUIRE(std::gcd(p.a, p.q) == 1);
      REQUIRE(p.a <= p.q);
      thetas.push_back(p.theta);
    }
    const double radius = 1.0 / (4.0 * std::numbers::pi * n);
    CounterEngine engine(n, 0);
    for (int i = 0; i < 10000; ++i) {
      const double x = to_unit_interval(engine());
      const auto it = std::lower_bound(thetas.begin(), thetas.end(), x);
      double best = circle_distance(x, it == thetas.end() ? thetas.front() : *it);
      best = std::min(best, circle_distance(x, it == thetas.begin() ? thetas.back() : *std::prev(it)));
      REQUIRE(best <= radius);
    }
  }
}

TEST_CASE("discretization subsampling") {
  const std::uint64_t n = 2048;
  const double q = expsum::default_denominator_bound(n);
  const auto total = expsum::discretization_size(n, q);
  const auto a = expsum::sample_discretization(n, q, 500, 9);
  const auto b = expsum::sample_discretization(n, q, 500, 9);
  CHECK(a.size() == 500);
  CHECK(std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
    return x.a == y.a && x.q == y.q && x.j == y.j;
  }));
  CHECK(expsum::sample_discretization(n, q, total + 5, 9).size() == total);
  std::uint64_t visited = 0;
  expsum::for_each_discretization_point(n, q, [&](const auto&) { ++visited; });
  CHECK(visited == total);
}

TEST_CASE("set A") {
  const auto a = expsum::build_theta_set_a(256, table());
  CHECK(a.q == 17);
  CHECK(a.numerators == std::vector<std::uint32_t>{3, 5});
  CHECK(a.thetas[0] == doctest::Approx(3.0 / 17));
  CHECK(a.thetas[1] == doctest::Approx(5.0 / 17));

  const auto b = expsum::build_theta_set_a(100'000, table());
  CHECK(b.q == 317);
  CHECK(b.numerators == std::vector<std::uint32_t>{7, 11, 13, 17});
  for (std::uint64_t n : {1000u, 65536u, 1'000'000u}) {
    const auto s = expsum::build_theta_set_a(n, table());
    CHECK(s.thetas.size() == ntcore::floor_power(n, Exponent(1, 8)));
    for (double t : s.thetas) CHECK((t > 0.0 && t < 1.0));
  }
}

TEST_CASE("rough sum regrouped by r equals the filtered point sum") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::uint64_t n = 500 + 1733 * seed;
    const auto s = rmf::sample(RmfKind::Steinhaus, n, seed, table());
    for (double theta : {0.0, 0.123, 0.5, 0.77}) {
      for (const auto alpha : {Exponent(4, 5), Exponent(6, 7), Exponent(3, 5)}) {
        const auto filtered = CoefficientFilter::rough_at_least(alpha).apply(s, table());
        const auto direct = expsum::eval_point(filtered, theta);
        const auto grouped = expsum::rough_sum_by_r(s, theta, alpha, table());
        REQUIRE(std::abs(direct - grouped) < 1e-10);
      }
    }
  }
  const auto s = rmf::sample(RmfKind::Steinhaus, 100, 0, table());
  CHECK_THROWS_AS(expsum::rough_sum_by_r(s, 0.1, Exponent(1, 2), table()), rmflab::DomainError);
}
