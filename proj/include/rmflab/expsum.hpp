#pragma once

// Evaluation and maximization of the normalized exponential sum
//   P_N(theta) = N^{-1/2} sum_{n <= N} a_n e(n theta),   e(x) = exp(2 pi i x),
// for coefficients a_n = f(n) restricted by the size of the largest prime
// factor of n. Also builds the two finite theta sets used to reduce maxima
// over [0, 1] to finite maxima.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rmflab/ntcore.hpp"
#include "rmflab/rmf.hpp"

namespace rmflab::expsum {

using ntcore::Exponent;
using Coefficients = std::span<const std::complex<double>>;  // a_0..a_N, a_0 ignored

// Selects n <= N by P(n). The threshold t = ceil(N^alpha) is exact:
// RoughAtLeast keeps P(n) >= t, SmoothAtMost keeps P(n) < t, so the two
// partition {1..N} and an n with P(n) = N^alpha lands in the rough part.
class CoefficientFilter {
 public:
  enum class Kind { All, RoughAtLeast, SmoothAtMost };

  static CoefficientFilter all() { return CoefficientFilter(Kind::All, Exponent(1, 2)); }
  static CoefficientFilter rough_at_least(Exponent alpha);
  static CoefficientFilter smooth_at_most(Exponent alpha);

  Kind kind() const { return kind_; }
  Exponent alpha() const { return alpha_; }

  // Applies the filter for a given N: P(n) is read from the table.
  bool keeps(std::uint64_t n, std::uint64_t big_n, const ntcore::PrimeTable& table) const;
  // a_n = f(n) when kept, else 0.
  std::vector<std::complex<double>> apply(const rmf::RmfValues& values,
                                          const ntcore::PrimeTable& table) const;

 private:
  CoefficientFilter(Kind kind, Exponent alpha) : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  Exponent alpha_;
};

// Direct compensated summation; O(N) trig evaluations.
std::complex<double> eval_point(Coefficients coeffs, double theta);
std::complex<double> eval_point(const rmf::RmfValues& values, const CoefficientFilter& filter,
                                double theta, const ntcore::PrimeTable& table);

struct GridEvaluation {
  std::uint32_t n = 0;
  std::size_t requested_size = 0;
  std::size_t size = 0;  // realized transform length M; entry j sits at theta = j / M
  double oversample = 0.0;
  CoefficientFilter filter = CoefficientFilter::all();
  std::vector<std::complex<double>> values;
};

// Smallest 7-smooth integer >= m (lengths the FFT backend handles natively).
std::size_t next_admissible_size(std::size_t m);

// values[j] = N^{-1/2} sum a_n e(n j / M) via one zero-padded length-M
// transform. Requires M >= N + 1; M is rounded up to an admissible length.
GridEvaluation eval_grid_fft(Coefficients coeffs, std::size_t m,
                             CoefficientFilter filter = CoefficientFilter::all());
GridEvaluation eval_grid_fft(const rmf::RmfValues& values, const CoefficientFilter& filter,
                             std::size_t m, const ntcore::PrimeTable& table);

struct MaxModulus {
  double theta_star = 0.0;
  double magnitude = 0.0;
  std::size_t index = 0;
  std::size_t grid_size = 0;
};

inline constexpr double kBernsteinOversample = 4.0 * 3.14159265358979323846;

// Grid maximum of |P_N| over M = ceil(oversample * N) points (rounded up to
// an admissible length). With spacing <= 1/(4 pi N) Bernstein's inequality
// puts the true maximum over [0, 1] in [magnitude, 2 * magnitude].
// Ties resolve to the smallest index.
MaxModulus max_modulus(Coefficients coeffs, double oversample = kBernsteinOversample);
MaxModulus max_modulus(const rmf::RmfValues& values, const CoefficientFilter& filter,
                       double oversample, const ntcore::PrimeTable& table);

struct DiscretizationPoint {
  std::uint32_t a = 1;
  std::uint32_t q = 1;
  std::int64_t j = 0;
  double theta = 0.0;  // a/q + j/(4 pi N) mod 1
};

double discretization_theta(std::uint32_t a, std::uint32_t q, std::int64_t j, std::uint64_t n);

// Default denominator bound 4 pi sqrt(N).
double default_denominator_bound(std::uint64_t n);

// Largest N for which build_discretization materializes the full set.
inline constexpr std::uint64_t kMaterializeLimit = 1'000'000;

// Visits every (a, q, j) with q <= Q, 1 <= a <= q, gcd(a, q) = 1 and
// |j| <= 4 pi N / (q Q), in (q, a, j) order. Throws DomainError unless
// 2 <= Q <= 4 pi N.
void for_each_discretization_point(std::uint64_t n, double q_bound,
                                   const std::function<void(const DiscretizationPoint&)>& visit);

// Number of triples visited by for_each_discretization_point.
std::uint64_t discretization_size(std::uint64_t n, double q_bound);

// Full set, deduplicated on theta and sorted by theta.
std::vector<DiscretizationPoint> build_discretization(std::uint64_t n, double q_bound);

// `count` triples drawn uniformly without replacement (seeded), sorted by
// theta; the full set when count >= discretization_size.
std::vector<DiscretizationPoint> sample_discretization(std::uint64_t n, double q_bound,
                                                       std::uint64_t count, std::uint64_t seed);

struct ThetaSetA {
  std::uint32_t q = 0;                    // smallest prime in [sqrt N, 2 sqrt N]
  std::vector<std::uint32_t> numerators;  // first floor(N^{1/8}) primes > N^{1/7}
  std::vector<double> thetas;             // numerator / q mod 1
};

ThetaSetA build_theta_set_a(std::uint64_t n, const ntcore::PrimeTable& table);

// Rough part sum_{P(n) >= N^alpha} f(n) e(n theta) / sqrt(N), regrouped as
// sum_r sum_{N/(r+1) < p <= N/r} f(p) sum_{m <= r} f(m) e(m p theta).
// Needs alpha > 1/2 so each rough n = p m has a unique large prime p.
std::complex<double> rough_sum_by_r(const rmf::RmfValues& values, double theta,
                                    Exponent alpha, const ntcore::PrimeTable& table);

}  // namespace rmflab::expsum
