#pragma once

// Conditional variances and covariances of the large-prime part of P_N.
//
// Conditioning on f at small primes fixes the inner sums
//   S_p(theta) = sum_{m <= N/p} f(m) e(m p theta),
// and the large-prime part becomes a weighted sum of independent f(p).
// Steinhaus:  Var = norm * sum_p |S_p|^2,      Cov = norm * sum_p Re(S_p(t1) conj S_p(t2))
// Rademacher: Var = norm * sum_p (Re S_p)^2,   Cov = norm * sum_p Re S_p(t1) Re S_p(t2)
// with norm = 1/(2N) (Half) or 1/N (Full), over primes N^alpha <= p <= N.

#include <cstdint>
#include <optional>
#include <span>

#include "rmflab/expsum.hpp"
#include "rmflab/ntcore.hpp"
#include "rmflab/rmf.hpp"

namespace rmflab::variance {

using ntcore::Exponent;
using rmf::RmfKind;

enum class Normalization { Half, Full };

struct VarianceSpec {
  Exponent pmin_exponent = Exponent(4, 5);
  Normalization normalization = Normalization::Full;
  RmfKind kind = RmfKind::Steinhaus;
};

// Lower-bound pipeline: p > N^{6/7}; Steinhaus with 1/(2N), Rademacher with 1/N.
VarianceSpec lower_bound_spec(RmfKind kind);
// Upper-bound pipeline: Steinhaus, N^{0.8} <= p <= N, 1/N.
VarianceSpec upper_bound_spec();

double conditional_variance(const rmf::RmfValues& values, double theta, const VarianceSpec& spec,
                            const ntcore::PrimeTable& table);

// (1/N) sum_{r <= N^{1-alpha}} sum_{N/(r+1) < p <= N/r, p >= N^alpha} |sum_{m <= r} f(m) e(m p theta)|^2.
// Equal to conditional_variance with the same alpha, Full normalization and
// Steinhaus weighting; the inner sums use incremental phases.
double rewrite_by_r(const rmf::RmfValues& values, double theta, const ntcore::PrimeTable& table,
                    Exponent alpha = Exponent(4, 5));

// Requires theta1 != theta2 (use conditional_variance for the diagonal).
double covariance_z(const rmf::RmfValues& values, double theta1, double theta2,
                    const VarianceSpec& spec, const ntcore::PrimeTable& table);

// Expected diagonal contribution (1/2N) sum_{N^{6/7} < p <= N} D(N/p) where
// D(x) = floor(x) for Steinhaus and the exact squarefree count up to x for
// Rademacher.
double diagonal_term(std::uint64_t n, RmfKind kind, const ntcore::PrimeTable& table);

// Mertens main term of the diagonal: (1/2) sum 1/p for Steinhaus,
// (3/pi^2) sum 1/p for Rademacher, over the same primes.
double diagonal_main_term(std::uint64_t n, RmfKind kind, const ntcore::PrimeTable& table);

struct VarianceMax {
  double theta_star = 0.0;
  double value = 0.0;
  expsum::DiscretizationPoint point;
  std::size_t evaluated = 0;  // number of points actually evaluated
  std::size_t available = 0;  // size of the input point set
};

// Maximum conditional variance over `points`, or over a seeded uniform
// subsample of `subsample` of them. Steinhaus/Full specs go through
// rewrite_by_r. Ties resolve to the smallest theta, independent of threads.
VarianceMax max_variance_over_d(const rmf::RmfValues& values,
                                std::span<const expsum::DiscretizationPoint> points,
                                const VarianceSpec& spec, std::optional<std::size_t> subsample,
                                std::uint64_t seed, const ntcore::PrimeTable& table,
                                unsigned threads = 1);

}  // namespace rmflab::variance
