#pragma once

// Deterministic number-theoretic kernels: a linear sieve and the arithmetic
// functions built on top of it. Everything here is a pure function of its
// arguments; a PrimeTable is immutable once built and may be shared freely
// between threads.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace rmflab::ntcore {

// Largest sieve limit accepted by default (documented memory cap).
inline constexpr std::uint64_t kDefaultSieveCap = std::uint64_t{1} << 31;

class PrimeTable {
 public:
  // Linear (Euler) sieve: O(limit) time, 8 bytes per integer.
  static PrimeTable build(std::uint64_t limit,
                          std::uint64_t cap = kDefaultSieveCap);

  std::uint32_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }

  // Smallest prime factor; defined for 2 <= n <= limit.
  std::uint32_t spf(std::uint32_t n) const { return spf_[n]; }
  // Largest prime factor P(n), with P(1) = 1.
  std::uint32_t lpf(std::uint32_t n) const { return lpf_[n]; }
  bool is_prime(std::uint32_t n) const { return n >= 2 && spf_[n] == n; }

  // pi(x) for x <= limit.
  std::size_t prime_count(std::uint64_t x) const;
  // Primes p with lo <= p <= hi (clamped to the table).
  std::span<const std::uint32_t> primes_between(std::uint64_t lo,
                                                std::uint64_t hi) const;

  // Throws DomainError unless 1 <= n <= limit.
  void check_range(std::uint64_t n, const char* what) const;

 private:
  PrimeTable() = default;

  std::uint32_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> lpf_;
};

inline PrimeTable build_prime_table(std::uint64_t limit,
                                    std::uint64_t cap = kDefaultSieveCap) {
  return PrimeTable::build(limit, cap);
}

struct PrimePower {
  std::uint32_t prime;
  std::uint32_t exponent;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // ascending primes, exponents >= 1
};

Factorization factorize(std::uint64_t n, const PrimeTable& table);

// P(n); returns 1 for n = 1.
std::uint32_t largest_prime_factor(std::uint64_t n, const PrimeTable& table);

// Number of ordered k-tuples with product n.
std::uint64_t tau_k(std::uint64_t n, std::uint32_t k, const PrimeTable& table);

std::uint64_t euler_phi(std::uint64_t n, const PrimeTable& table);

bool is_squarefree(std::uint64_t n, const PrimeTable& table);

// c_q(n) by direct summation over reduced residues b mod q. The phase bn/q
// is reduced in integers before the trig call.
std::complex<double> ramanujan_sum_direct(std::uint64_t q, std::int64_t n);
double ramanujan_sum(std::uint64_t q, std::int64_t n);

double von_mangoldt(std::uint64_t n, const PrimeTable& table);

// Rational exponent num/den > 0 in lowest terms. Thresholds such as N^{4/5}
// are compared exactly through integer powers.
class Exponent {
 public:
  constexpr Exponent(std::uint32_t num, std::uint32_t den) : num_(num), den_(den) {
    normalize();
  }
  // Closest rational with denominator <= 10^4 within 1e-12; throws
  // DomainError when no such rational exists.
  static Exponent from_double(double alpha);

  std::uint32_t num() const { return num_; }
  std::uint32_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / den_; }

  bool operator==(const Exponent&) const = default;

 private:
  constexpr void normalize() {
    std::uint32_t a = num_, b = den_;
    while (b != 0) {
      const std::uint32_t t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num_ /= a;
      den_ /= a;
    }
  }

  std::uint32_t num_;
  std::uint32_t den_;
};

// Largest integer c with c <= N^alpha (exact).
std::uint64_t floor_power(std::uint64_t n, Exponent alpha);
// Smallest integer c with c >= N^alpha (exact).
std::uint64_t ceil_power(std::uint64_t n, Exponent alpha);

// Sum of 1/p over primes N^alpha < p <= N; 0 for an empty range.
double mertens_tail(std::uint64_t n, Exponent alpha, const PrimeTable& table);

}  // namespace rmflab::ntcore
