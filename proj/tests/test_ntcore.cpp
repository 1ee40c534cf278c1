#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "rmflab/errors.hpp"
#include "rmflab/ntcore.hpp"

using namespace rmflab::ntcore;

namespace {

const PrimeTable& table() {
  static const PrimeTable t = PrimeTable::build(1'000'000);
  return t;
}

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t brute_tau(std::uint64_t n, std::uint32_t k) {
  if (k == 1) return 1;
  std::uint64_t total = 0;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) total += brute_tau(n / d, k - 1);
  }
  return total;
}

}  // namespace

TEST_CASE("sieve lists primes") {
  const auto small = PrimeTable::build(10);
  CHECK(std::vector<std::uint32_t>(small.primes().begin(), small.primes().end()) ==
        std::vector<std::uint32_t>{2, 3, 5, 7});
  const auto two = PrimeTable::build(2);
  CHECK(two.primes().size() == 1);
  CHECK(two.primes()[0] == 2);
}

TEST_CASE("sieve agrees with trial division up to 10^6") {
  std::size_t count = 0;
  bool agree = true;
  for (std::uint32_t n = 1; n <= 1'000'000; ++n) {
    const bool prime = trial_division_prime(n);
    count += prime;
    agree = agree && prime == table().is_prime(n);
  }
  CHECK(agree);
  CHECK(count == 78498);
  CHECK(table().prime_count(1'000'000) == 78498);
}

TEST_CASE("sieve rejects limits above the cap") {
  CHECK_THROWS_AS(PrimeTable::build(1000, 100), rmflab::ResourceError);
  CHECK_THROWS_AS(table().check_range(2'000'000, "test"), rmflab::DomainError);
}

TEST_CASE("spf and lpf tables match factorizations") {
  for (std::uint32_t n = 2; n <= 20000; ++n) {
    const auto f = factorize(n, table());
    std::uint64_t product = 1;
    for (const auto& [p, e] : f.factors) {
      REQUIRE(table().is_prime(p));
      for (std::uint32_t i = 0; i < e; ++i) product *= p;
    }
    REQUIRE(product == n);
    REQUIRE(f.factors.front().prime == table().spf(n));
    REQUIRE(f.factors.back().prime == table().lpf(n));
  }
}

TEST_CASE("factorize examples") {
  CHECK(factorize(1, table()).factors.empty());
  CHECK(factorize(12, table()).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(97, table()).factors == std::vector<PrimePower>{{97, 1}});
}

TEST_CASE("largest prime factor") {
  CHECK(largest_prime_factor(12, table()) == 3);
  CHECK(largest_prime_factor(97, table()) == 97);
  CHECK(largest_prime_factor(1, table()) == 1);
}

TEST_CASE("tau_k examples and divisor-sum oracle") {
  CHECK(tau_k(1, 7, table()) == 1);
  CHECK(tau_k(4, 3, table()) == 6);
  CHECK(tau_k(6, 2, table()) == 4);
  for (std::uint64_t n = 1; n <= 300; ++n) {
    for (std::uint32_t k = 1; k <= 4; ++k) REQUIRE(tau_k(n, k, table()) == brute_tau(n, k));
  }
}

TEST_CASE("tau_k is multiplicative") {
  for (std::uint64_t m = 1; m <= 60; ++m) {
    for (std::uint64_t n = 1; n <= 60; ++n) {
      if (std::gcd(m, n) != 1) continue;
      REQUIRE(tau_k(m * n, 3, table()) == tau_k(m, 3, table()) * tau_k(n, 3, table()));
    }
  }
}

TEST_CASE("euler phi") {
  CHECK(euler_phi(1, table()) == 1);
  CHECK(euler_phi(97, table()) == 96);
  CHECK(euler_phi(10, table()) == 4);
  for (std::uint64_t n = 1; n <= 500; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t b = 1; b <= n; ++b) count += std::gcd(b, n) == 1;
    REQUIRE(euler_phi(n, table()) == count);
  }
}

TEST_CASE("squarefree") {
  CHECK(is_squarefree(1, table()));
  CHECK(is_squarefree(30, table()));
  CHECK_FALSE(is_squarefree(12, table()));
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= 100000; ++n) count += is_squarefree(n, table());
  CHECK(count == 60794);
}

TEST_CASE("ramanujan sums") {
  CHECK(ramanujan_sum(1, 17) == doctest::Approx(1.0));
  CHECK(ramanujan_sum(4, 2) == doctest::Approx(-2.0));
  for (std::uint64_t q = 1; q <= 60; ++q) {
    CHECK(ramanujan_sum(q, 0) == doctest::Approx(static_cast<double>(euler_phi(q, table()))));
  }
  // integer valued, real, even in n, bounded by gcd
  for (std::uint64_t q = 1; q <= 120; ++q) {
    for (std::int64_t n = -120; n <= 120; ++n) {
      const auto c = ramanujan_sum_direct(q, n);
      const double g = static_cast<double>(std::gcd(static_cast<std::uint64_t>(std::llabs(n)), q));
      REQUIRE(std::abs(c.imag()) < 1e-9);
      REQUIRE(std::abs(c.real() - std::round(c.real())) < 1e-9);
      REQUIRE(std::abs(c) <= g + 1e-9);
      REQUIRE(c.real() == doctest::Approx(ramanujan_sum(q, -n)));
    }
  }
}

TEST_CASE("von mangoldt") {
  CHECK(von_mangoldt(8, table()) == doctest::Approx(std::log(2.0)));
  CHECK(von_mangoldt(6, table()) == 0.0);
  CHECK(von_mangoldt(7, table()) == doctest::Approx(std::log(7.0)));
  CHECK(von_mangoldt(1, table()) == 0.0);
  // sum_{d | n} Lambda(d) = log n
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    double s = 0.0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) s += von_mangoldt(d, table());
    }
    REQUIRE(s == doctest::Approx(std::log(static_cast<double>(n))));
  }
}

TEST_CASE("exponent normalization and parsing") {
  CHECK(Exponent(8, 10) == Exponent(4, 5));
  CHECK(Exponent::from_double(0.8) == Exponent(4, 5));
  CHECK(Exponent::from_double(6.0 / 7.0) == Exponent(6, 7));
  CHECK_THROWS_AS(Exponent::from_double(std::acos(-1.0) / 4), rmflab::DomainError);
}

TEST_CASE("exact integer powers") {
  CHECK(floor_power(100, Exponent(1, 2)) == 10);
  CHECK(ceil_power(100, Exponent(1, 2)) == 10);
  CHECK(floor_power(101, Exponent(1, 2)) == 10);
  CHECK(ceil_power(101, Exponent(1, 2)) == 11);
  CHECK(floor_power(100, Exponent(4, 5)) == 39);
  CHECK(ceil_power(100, Exponent(4, 5)) == 40);
  CHECK(floor_power(128, Exponent(1, 7)) == 2);
  CHECK(ceil_power(128, Exponent(1, 7)) == 2);
  CHECK(floor_power(127, Exponent(1, 7)) == 1);
  // property: c = floor(N^a) satisfies c^den <= N^num < (c + 1)^den
  for (std::uint64_t n = 2; n <= 3000; n += 7) {
    for (const auto alpha : {Exponent(1, 2), Exponent(4, 5), Exponent(6, 7), Exponent(1, 8)}) {
      const auto c = floor_power(n, alpha);
      const double v = std::pow(static_cast<double>(n), alpha.value());
      REQUIRE(static_cast<double>(c) <= v + 1e-9);
      REQUIRE(static_cast<double>(c + 1) > v - 1e-9);
      const auto d = ceil_power(n, alpha);
      REQUIRE((d == c || d == c + 1));
    }
  }
}

TEST_CASE("mertens tail") {
  CHECK(mertens_tail(10, Exponent(6, 7), table()) == 0.0);
  double expected = 0.0;
  for (std::uint32_t p : {11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}) {
    expected += 1.0 / p;
  }
  CHECK(mertens_tail(100, Exponent(1, 2), table()) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::abs(mertens_tail(1'000'000, Exponent(6, 7), table()) - std::log(7.0 / 6.0)) < 0.02);
}
