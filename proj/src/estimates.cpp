#include "rmflab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "rmflab/errors.hpp"
#include "rmflab/random.hpp"
#include "rmflab/summation.hpp"

namespace rmflab::estimates {

namespace {

void finish(BoundReport& report) {
  report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
}

// Running mean and variance (Welford).
class MeanAccumulator {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  double mean() const { return mean_; }
  double stderr_of_mean() const {
    if (count_ < 2) return 0.0;
    return std::sqrt(m2_ / static_cast<double>(count_ - 1) / static_cast<double>(count_));
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double circle_distance(double alpha) { return std::abs(alpha - std::round(alpha)); }

}  // namespace

std::complex<double> lambda_exp_sum(std::uint64_t n, double beta, const ntcore::PrimeTable& table) {
  table.check_range(n, "lambda_exp_sum");
  CompensatedComplexSum acc;
  for (std::uint32_t k = 2; k <= n; ++k) {
    // prime powers are exactly the n with P(n) = spf(n)
    if (table.spf(k) != table.lpf(k)) continue;
    acc += std::log(static_cast<double>(table.spf(k))) * unit_phase(static_cast<long long>(k), beta);
  }
  return acc.value();
}

BoundReport davenport_report(std::uint64_t n, std::int64_t a, std::uint64_t q,
                             const ntcore::PrimeTable& table, double threshold) {
  if (q == 0) throw DomainError("davenport_report: q must be >= 1");
  if (std::gcd(static_cast<std::uint64_t>(std::abs(a)), q) != 1) {
    throw DomainError("davenport_report: gcd(a, q) must be 1");
  }
  const double beta = static_cast<double>(a) / static_cast<double>(q);
  BoundReport report;
  report.name = "davenport";
  report.lhs = std::abs(lambda_exp_sum(n, beta, table));
  const double nd = static_cast<double>(n);
  const double qd = static_cast<double>(q);
  report.rhs = (nd / std::sqrt(qd) + std::pow(nd, 0.8) + std::sqrt(nd * qd)) * std::pow(std::log(nd), 4);
  finish(report);
  report.holds = report.ratio < threshold;
  report.parameters = {{"N", nd}, {"a", static_cast<double>(a)}, {"q", qd}, {"threshold", threshold}};
  return report;
}

BoundReport vdc_report(std::uint64_t m, std::uint64_t m_prime, double theta, double threshold) {
  if (m < 1) throw DomainError("vdc_report: M must be >= 1");
  if (m_prime < m || m_prime > 2 * m) throw DomainError("vdc_report: M' must lie in [M, 2M]");
  if (theta == 0.0 || !std::isfinite(theta)) throw DomainError("vdc_report: theta must be nonzero");
  CompensatedComplexSum acc;
  for (std::uint64_t k = m_prime; k <= 2 * m; ++k) {
    const long double x = static_cast<long double>(theta) / static_cast<long double>(k + 1);
    const long double frac = x - std::floor(x);
    acc += std::polar(1.0, kTwoPi * static_cast<double>(frac));
  }
  BoundReport report;
  report.name = "van_der_corput";
  report.lhs = std::abs(acc.value());
  const double md = static_cast<double>(m);
  const double t = std::abs(theta);
  report.rhs = std::sqrt(t / md) + std::pow(md, 1.5) / std::sqrt(t);
  finish(report);
  report.holds = report.ratio < threshold;
  report.parameters = {{"M", md}, {"M_prime", static_cast<double>(m_prime)}, {"theta", theta},
                       {"threshold", threshold}};
  return report;
}

BoundReport brun_titchmarsh_report(double x, double y, std::uint64_t q, std::int64_t a,
                                   const ntcore::PrimeTable& table) {
  if (q == 0) throw DomainError("brun_titchmarsh_report: q must be >= 1");
  if (!(x > 2.0)) throw DomainError("brun_titchmarsh_report: x must exceed 2");
  if (!(y > static_cast<double>(q))) throw DomainError("brun_titchmarsh_report: y must exceed q");
  const auto residue = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(q)) +
                                                   static_cast<std::int64_t>(q)) %
                                                  static_cast<std::int64_t>(q));
  if (std::gcd(residue, q) != 1) throw DomainError("brun_titchmarsh_report: gcd(a, q) must be 1");
  const auto lo = static_cast<std::uint64_t>(std::floor(x)) + 1;
  const auto hi = static_cast<std::uint64_t>(std::floor(x + y));
  table.check_range(hi, "brun_titchmarsh_report");

  std::uint64_t count = 0;
  for (const std::uint32_t p : table.primes_between(lo, hi)) {
    if (p % q == residue) ++count;
  }
  BoundReport report;
  report.name = "brun_titchmarsh";
  report.lhs = static_cast<double>(count);
  report.rhs = 2.0 * y /
               (static_cast<double>(ntcore::euler_phi(q, table)) * std::log(y / static_cast<double>(q)));
  finish(report);
  report.holds = report.lhs <= report.rhs;
  report.parameters = {{"x", x}, {"y", y}, {"q", static_cast<double>(q)}, {"a", static_cast<double>(a)}};
  return report;
}

BoundReport moment_bound_check(std::span<const std::complex<double>> coeffs, double k,
                               rmf::RmfKind kind, std::uint64_t trials, std::uint64_t seed,
                               const ntcore::PrimeTable& table) {
  if (!(k >= 1.0)) throw DomainError("moment_bound_check: k must be >= 1");
  if (trials < 1000) throw DomainError("moment_bound_check: need at least 1000 trials");
  if (coeffs.size() < 2) throw DomainError("moment_bound_check: need at least one coefficient");
  const std::uint64_t n = coeffs.size() - 1;
  table.check_range(std::max<std::uint64_t>(n, 2), "moment_bound_check");

  const auto tau_index = static_cast<std::uint32_t>(2 * std::ceil(k) - 1);
  CompensatedSum weighted;
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (coeffs[i] == 0.0) continue;
    weighted += static_cast<double>(ntcore::tau_k(i, tau_index, table)) * std::norm(coeffs[i]);
  }

  MeanAccumulator moments;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto f = rmf::sample(kind, std::max<std::uint64_t>(n, 2), derive_seed(seed, t, 0x40), table);
    std::complex<double> s = 0.0;
    for (std::uint64_t i = 1; i <= n; ++i) s += coeffs[i] * f[i];
    moments.add(std::pow(std::norm(s), k));
  }

  BoundReport report;
  report.name = "moment_bound";
  report.lhs = moments.mean();
  report.stderr_lhs = moments.stderr_of_mean();
  report.rhs = std::pow(weighted.value(), k);
  finish(report);
  report.holds = report.lhs - 3.0 * report.stderr_lhs <= report.rhs;
  report.parameters = {{"N", static_cast<double>(n)},
                       {"k", k},
                       {"trials", static_cast<double>(trials)},
                       {"kind", kind == rmf::RmfKind::Steinhaus ? 1.0 : 0.0}};
  return report;
}

std::uint64_t quadruple_count(std::uint64_t r, Pairing pairing) {
  if (r > kMaxQuadrupleR) throw ResourceError("quadruple_count: r above 512");
  std::uint64_t count = 0;
  for (std::uint64_t m1 = 1; m1 <= r; ++m1) {
    for (std::uint64_t m2 = 1; m2 <= r; ++m2) {
      if (m1 == m2) continue;
      for (std::uint64_t m3 = 1; m3 <= r; ++m3) {
        // m1 m3 = m2 m4  or  m1 m4 = m2 m3, solved for m4
        const std::uint64_t num = pairing == Pairing::M1M3EqM2M4 ? m1 * m3 : m2 * m3;
        const std::uint64_t den = pairing == Pairing::M1M3EqM2M4 ? m2 : m1;
        if (num % den != 0) continue;
        const std::uint64_t m4 = num / den;
        if (m4 >= 1 && m4 <= r && m4 != m3) ++count;
      }
    }
  }
  return count;
}

std::uint64_t quadruple_count_vw(std::uint64_t r, Pairing pairing) {
  if (r > kMaxQuadrupleR) throw ResourceError("quadruple_count_vw: r above 512");
  std::unordered_set<std::uint64_t> images;
  const auto pack = [](std::uint64_t m1, std::uint64_t m2, std::uint64_t m3, std::uint64_t m4) {
    return (m1 << 48) | (m2 << 32) | (m3 << 16) | m4;
  };
  for (std::uint64_t a1 = 1; a1 <= r; ++a1) {
    for (std::uint64_t a2 = 1; a2 <= r; ++a2) {
      const std::uint64_t bound = r / std::max(a1, a2);
      for (std::uint64_t a3 = 1; a3 <= bound; ++a3) {
        for (std::uint64_t a4 = 1; a4 <= bound; ++a4) {
          if (a3 == a4) continue;
          const std::uint64_t m1 = a1 * a3;
          const std::uint64_t m2 = a1 * a4;
          if (pairing == Pairing::M1M3EqM2M4) {
            images.insert(pack(m1, m2, a2 * a4, a2 * a3));
          } else {
            images.insert(pack(m1, m2, a2 * a3, a2 * a4));
          }
        }
      }
    }
  }
  return images.size();
}

BoundReport orthogonality_mc(std::uint64_t r, std::uint64_t trials, std::uint64_t seed,
                             const ntcore::PrimeTable& table) {
  if (r < 1 || r > 128) throw DomainError("orthogonality_mc: r must lie in [1, 128]");
  if (trials < 2) throw DomainError("orthogonality_mc: need at least 2 trials");
  MeanAccumulator re_part;
  MeanAccumulator im_part;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto f = rmf::sample(rmf::RmfKind::Steinhaus, std::max<std::uint64_t>(r, 2),
                               derive_seed(seed, t, 0x0A), table);
    std::complex<double> first = 0.0;   // sum_{m1 != m2} f(m1) conj f(m2)
    std::complex<double> second = 0.0;  // sum_{m3 != m4} conj f(m3) f(m4)
    for (std::uint64_t i = 1; i <= r; ++i) {
      for (std::uint64_t j = 1; j <= r; ++j) {
        if (i == j) continue;
        first += f[i] * std::conj(f[j]);
        second += std::conj(f[i]) * f[j];
      }
    }
    const std::complex<double> x = first * second;
    re_part.add(x.real());
    im_part.add(x.imag());
  }
  BoundReport report;
  report.name = "steinhaus_orthogonality";
  report.lhs = re_part.mean();
  report.stderr_lhs = re_part.stderr_of_mean();
  report.rhs = static_cast<double>(quadruple_count(r, Pairing::M1M4EqM2M3));
  report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
  const double im_mean = im_part.mean();
  const double im_err = im_part.stderr_of_mean();
  report.holds = std::abs(report.lhs - report.rhs) <= 4.0 * report.stderr_lhs &&
                 std::abs(im_mean) <= 4.0 * im_err + 1e-12;
  report.parameters = {{"r", static_cast<double>(r)},
                       {"trials", static_cast<double>(trials)},
                       {"imag_mean", im_mean},
                       {"imag_stderr", im_err}};
  return report;
}

BoundReport geometric_sum_report(std::uint64_t length, double alpha) {
  if (length < 1) throw DomainError("geometric_sum_report: L must be >= 1");
  CompensatedComplexSum acc;
  for (std::uint64_t k = 0; k < length; ++k) acc += unit_phase(static_cast<long long>(k), alpha);
  BoundReport report;
  report.name = "geometric_sum";
  report.lhs = std::abs(acc.value());
  const double dist = circle_distance(alpha);
  const double ld = static_cast<double>(length);
  report.rhs = dist == 0.0 ? ld : std::min(ld, 1.0 / (2.0 * dist));
  finish(report);
  // floating slack: one ulp-scale error per term
  report.holds = report.lhs <= report.rhs + 1e-12 * ld + 1e-12;
  report.parameters = {{"L", ld}, {"alpha", alpha}};
  return report;
}

}  // namespace rmflab::estimates
