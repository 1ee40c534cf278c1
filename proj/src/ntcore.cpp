#include "rmflab/ntcore.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "rmflab/errors.hpp"
#include "rmflab/summation.hpp"

namespace rmflab::ntcore {

PrimeTable PrimeTable::build(std::uint64_t limit, std::uint64_t cap) {
  if (limit < 2) {
    throw DomainError("build_prime_table: limit must be >= 2, got " +
                      std::to_string(limit));
  }
  if (limit > cap || limit > std::uint64_t{0xFFFFFFFEu}) {
    throw ResourceError("build_prime_table: limit " + std::to_string(limit) +
                        " exceeds sieve cap " + std::to_string(cap));
  }
  PrimeTable table;
  const auto n_max = static_cast<std::uint32_t>(limit);
  table.limit_ = n_max;
  table.spf_.assign(std::size_t{n_max} + 1, 0);
  table.lpf_.assign(std::size_t{n_max} + 1, 0);
  // pi(x) < 1.26 x / log x for x > 1.
  table.primes_.reserve(static_cast<std::size_t>(
      1.26 * static_cast<double>(n_max) / std::log(static_cast<double>(n_max))) + 16);

  auto& spf = table.spf_;
  auto& primes = table.primes_;
  for (std::uint32_t i = 2; i <= n_max; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      primes.push_back(i);
    }
    const std::uint32_t bound = spf[i];
    for (const std::uint32_t p : primes) {
      if (p > bound) break;
      const std::uint64_t composite = std::uint64_t{i} * p;
      if (composite > n_max) break;
      spf[composite] = p;
    }
  }

  auto& lpf = table.lpf_;
  lpf[1] = 1;
  for (std::uint32_t n = 2; n <= n_max; ++n) {
    lpf[n] = std::max(spf[n], lpf[n / spf[n]]);
  }
  return table;
}

std::size_t PrimeTable::prime_count(std::uint64_t x) const {
  return static_cast<std::size_t>(
      std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::span<const std::uint32_t> PrimeTable::primes_between(std::uint64_t lo,
                                                          std::uint64_t hi) const {
  if (hi < lo) return {};
  const auto first = std::lower_bound(primes_.begin(), primes_.end(), lo);
  const auto last = std::upper_bound(first, primes_.end(), hi);
  return {first, last};
}

void PrimeTable::check_range(std::uint64_t n, const char* what) const {
  if (n < 1 || n > limit_) {
    throw DomainError(std::string(what) + ": argument " + std::to_string(n) +
                      " outside sieve range [1, " + std::to_string(limit_) + "]");
  }
}

Factorization factorize(std::uint64_t n, const PrimeTable& table) {
  table.check_range(n, "factorize");
  Factorization out;
  out.n = n;
  auto rest = static_cast<std::uint32_t>(n);
  while (rest > 1) {
    const std::uint32_t p = table.spf(rest);
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  return out;
}

std::uint32_t largest_prime_factor(std::uint64_t n, const PrimeTable& table) {
  table.check_range(n, "largest_prime_factor");
  return table.lpf(static_cast<std::uint32_t>(n));
}

std::uint64_t tau_k(std::uint64_t n, std::uint32_t k, const PrimeTable& table) {
  if (k == 0) throw DomainError("tau_k: k must be >= 1");
  table.check_range(n, "tau_k");
  using boost::multiprecision::uint128_t;
  uint128_t total = 1;
  for (const auto& [p, e] : factorize(n, table).factors) {
    // binomial(e + k - 1, k - 1) = binomial(e + k - 1, e), built incrementally
    uint128_t c = 1;
    for (std::uint32_t i = 1; i <= e; ++i) {
      c = c * (std::uint64_t{k} - 1 + i) / i;
    }
    total *= c;
    if (total > std::numeric_limits<std::uint64_t>::max()) {
      throw ResourceError("tau_k: result exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t euler_phi(std::uint64_t n, const PrimeTable& table) {
  table.check_range(n, "euler_phi");
  std::uint64_t phi = n;
  for (const auto& f : factorize(n, table).factors) {
    phi = phi / f.prime * (f.prime - 1);
  }
  return phi;
}

bool is_squarefree(std::uint64_t n, const PrimeTable& table) {
  const auto fac = factorize(n, table);
  return std::all_of(fac.factors.begin(), fac.factors.end(),
                     [](const PrimePower& f) { return f.exponent == 1; });
}

std::complex<double> ramanujan_sum_direct(std::uint64_t q, std::int64_t n) {
  if (q == 0) throw DomainError("ramanujan_sum: q must be >= 1");
  const auto qq = static_cast<std::int64_t>(q);
  const std::int64_t residue = ((n % qq) + qq) % qq;
  CompensatedComplexSum acc;
  for (std::uint64_t b = 1; b <= q; ++b) {
    if (std::gcd(b, q) != 1) continue;
    const auto num = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(b) * static_cast<std::uint64_t>(residue)) % q);
    acc += std::polar(1.0, kTwoPi * static_cast<double>(num) / static_cast<double>(q));
  }
  return acc.value();
}

double ramanujan_sum(std::uint64_t q, std::int64_t n) {
  return ramanujan_sum_direct(q, n).real();
}

double von_mangoldt(std::uint64_t n, const PrimeTable& table) {
  table.check_range(n, "von_mangoldt");
  if (n == 1) return 0.0;
  const auto fac = factorize(n, table);
  if (fac.factors.size() != 1) return 0.0;
  return std::log(static_cast<double>(fac.factors.front().prime));
}

Exponent Exponent::from_double(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("Exponent: value must be positive and finite");
  }
  // Continued-fraction convergents.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = alpha;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > 10000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - alpha) <= 1e-12) {
      return Exponent(static_cast<std::uint32_t>(h1), static_cast<std::uint32_t>(k1));
    }
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  throw DomainError("Exponent: " + std::to_string(alpha) +
                    " is not a rational with denominator <= 10^4");
}

namespace {

using boost::multiprecision::cpp_int;

// sign of c^den - n^num
int compare_power(std::uint64_t c, std::uint64_t n, Exponent alpha) {
  const cpp_int lhs = boost::multiprecision::pow(cpp_int(c), alpha.den());
  const cpp_int rhs = boost::multiprecision::pow(cpp_int(n), alpha.num());
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::uint64_t power_guess(std::uint64_t n, Exponent alpha) {
  const long double g = std::pow(static_cast<long double>(n),
                                 static_cast<long double>(alpha.num()) / alpha.den());
  if (!(g < 1.8e19L)) throw DomainError("power threshold exceeds 64 bits");
  return static_cast<std::uint64_t>(std::floor(g));
}

}  // namespace

std::uint64_t floor_power(std::uint64_t n, Exponent alpha) {
  if (alpha.den() == 0 || alpha.num() == 0) throw DomainError("Exponent must be positive");
  std::uint64_t c = power_guess(n, alpha);
  while (c > 0 && compare_power(c, n, alpha) > 0) --c;
  while (compare_power(c + 1, n, alpha) <= 0) ++c;
  return c;
}

std::uint64_t ceil_power(std::uint64_t n, Exponent alpha) {
  const std::uint64_t f = floor_power(n, alpha);
  return compare_power(f, n, alpha) == 0 ? f : f + 1;
}

double mertens_tail(std::uint64_t n, Exponent alpha, const PrimeTable& table) {
  table.check_range(n, "mertens_tail");
  if (!(alpha.value() > 0.0 && alpha.value() < 1.0)) {
    throw DomainError("mertens_tail: alpha must lie in (0, 1)");
  }
  // p > N^alpha  <=>  p > floor(N^alpha)
  CompensatedSum acc;
  for (const std::uint32_t p : table.primes_between(floor_power(n, alpha) + 1, n)) {
    acc += 1.0 / p;
  }
  return acc.value();
}

}  // namespace rmflab::ntcore
