#pragma once

// Rademacher and Steinhaus random multiplicative functions.
//
// Values at primes come from a counter-based generator keyed by (seed, p),
// so f(p) does not depend on which other primes were drawn or in what
// order. This is what makes conditioning on small primes (resampling only
// the large ones) reproducible.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rmflab/ntcore.hpp"

namespace rmflab::rmf {

enum class RmfKind { Rademacher, Steinhaus };

std::string_view to_string(RmfKind kind);
// Accepts "rademacher" / "steinhaus" (case-insensitive).
RmfKind parse_kind(std::string_view text);

struct PrimeAssignment {
  RmfKind kind = RmfKind::Steinhaus;
  std::uint32_t limit = 0;
  std::vector<std::uint32_t> primes;             // all primes <= limit
  std::vector<std::complex<double>> values;      // f(primes[i])

  // f(p) for a prime p <= limit; DomainError otherwise.
  std::complex<double> at(std::uint32_t p) const;
};

// The value a seed assigns to the prime p.
std::complex<double> draw_prime_value(RmfKind kind, std::uint64_t seed, std::uint32_t p);

PrimeAssignment sample_prime_assignment(RmfKind kind, std::uint64_t limit,
                                        std::uint64_t seed,
                                        const ntcore::PrimeTable& table);

// A realization f(1..N). values[n] holds f(n); values[0] is 0 and unused.
struct RmfValues {
  RmfKind kind = RmfKind::Steinhaus;
  std::uint32_t n = 0;
  std::vector<std::complex<double>> values;
  PrimeAssignment assignment;
  std::uint64_t seed = 0;

  std::complex<double> operator[](std::size_t i) const { return values[i]; }
};

// Multiplicative extension in O(N) along smallest prime factors:
// Steinhaus f(n) = f(p) f(n/p); Rademacher f(n) = 0 when p^2 | n.
RmfValues extend(const PrimeAssignment& assignment, std::uint64_t n,
                 const ntcore::PrimeTable& table);

// sample_prime_assignment followed by extend, with limit = N.
RmfValues sample(RmfKind kind, std::uint64_t n, std::uint64_t seed,
                 const ntcore::PrimeTable& table);

// Keeps f(p) for p <= cutoff, redraws every larger prime from `seed`.
RmfValues resample_above_cutoff(const RmfValues& values, std::uint64_t cutoff,
                                std::uint64_t seed, const ntcore::PrimeTable& table);

// Test stub: f(n) = c for every 1 <= n <= N. Not a multiplicative function.
RmfValues constant_stub(std::uint64_t n, std::complex<double> c = 1.0,
                        RmfKind kind = RmfKind::Steinhaus);

// Salem-Zygmund baseline: independent +-1 at every n (index 0 unused).
std::vector<std::complex<double>> independent_signs(std::uint64_t n, std::uint64_t seed);

// Binary snapshot: "RMFV", u32 version, u32 kind, u64 N, u64 seed, then
// f(1..N) as (re, im) IEEE-754 doubles. All fields little-endian.
void write_values(std::ostream& out, const RmfValues& values);
RmfValues read_values(std::istream& in, const ntcore::PrimeTable& table);

}  // namespace rmflab::rmf
