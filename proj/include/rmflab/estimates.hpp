#pragma once

// Classical inequalities as executable checks. Each report carries the
// computed quantity (lhs), the bound with unit implicit constant (rhs) and
// whether the check's acceptance rule held.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "rmflab/ntcore.hpp"
#include "rmflab/rmf.hpp"

namespace rmflab::estimates {

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double stderr_lhs = 0.0;  // Monte Carlo standard error; 0 for exact checks
  bool holds = false;
  std::map<std::string, double> parameters;
};

// Reports for bounds with unknown implicit constants pass when ratio < this.
inline constexpr double kDefaultRatioThreshold = 10.0;

// sum_{n <= N} Lambda(n) e(n beta).
std::complex<double> lambda_exp_sum(std::uint64_t n, double beta, const ntcore::PrimeTable& table);

// |sum Lambda(n) e(n a/q)| against (N q^{-1/2} + N^{4/5} + N^{1/2} q^{1/2}) (log N)^4.
BoundReport davenport_report(std::uint64_t n, std::int64_t a, std::uint64_t q,
                             const ntcore::PrimeTable& table,
                             double threshold = kDefaultRatioThreshold);

// |sum_{M' <= n <= 2M} e(theta/(n+1))| against |theta|^{1/2} M^{-1/2} + M^{3/2} |theta|^{-1/2}.
BoundReport vdc_report(std::uint64_t m, std::uint64_t m_prime, double theta,
                       double threshold = kDefaultRatioThreshold);

// #{x < p <= x + y : p = a mod q} against 2y / (phi(q) log(y/q)); holds iff lhs <= rhs.
BoundReport brun_titchmarsh_report(double x, double y, std::uint64_t q, std::int64_t a,
                                   const ntcore::PrimeTable& table);

// Monte Carlo E|sum a_n f(n)|^{2k} against (sum tau_{2ceil(k)-1}(n) |a_n|^2)^k;
// holds iff lhs - 3 stderr <= rhs. coeffs[0] is ignored.
BoundReport moment_bound_check(std::span<const std::complex<double>> coeffs, double k,
                               rmf::RmfKind kind, std::uint64_t trials, std::uint64_t seed,
                               const ntcore::PrimeTable& table);

enum class Pairing { M1M4EqM2M3, M1M3EqM2M4 };

inline constexpr std::uint64_t kMaxQuadrupleR = 512;

// #{(m1, m2, m3, m4) in [1, r]^4 : m1 != m2, m3 != m4, pairing equation}
// by exhaustive search over (m1, m2, m3).
std::uint64_t quadruple_count(std::uint64_t r, Pairing pairing);

// Same count through m1 = a1 a3, m2 = a1 a4 and (m3, m4) = (a2 a4, a2 a3) or
// (a2 a3, a2 a4) according to the pairing, deduplicating image tuples.
std::uint64_t quadruple_count_vw(std::uint64_t r, Pairing pairing);

// Monte Carlo mean of sum_{m1 != m2, m3 != m4} f(m1) conj f(m2) conj f(m3) f(m4)
// for Steinhaus f against quadruple_count(r, M1M4EqM2M3); holds iff the real
// part is within 4 stderr of the count and the imaginary part within 4 stderr of 0.
BoundReport orthogonality_mc(std::uint64_t r, std::uint64_t trials, std::uint64_t seed,
                             const ntcore::PrimeTable& table);

// |sum_{k < L} e(k alpha)| against min(L, 1 / (2 ||alpha||)).
BoundReport geometric_sum_report(std::uint64_t length, double alpha);

}  // namespace rmflab::estimates
