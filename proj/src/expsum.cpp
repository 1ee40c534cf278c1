#include "rmflab/expsum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_set>

#include "rmflab/errors.hpp"
#include "rmflab/random.hpp"
#include "rmflab/summation.hpp"

namespace rmflab::expsum {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer fftw_buffer(std::size_t m) {
  auto* p = fftw_alloc_complex(m);
  if (p == nullptr) throw ResourceError("eval_grid_fft: allocation of " + std::to_string(m) + " failed");
  return FftwBuffer(p);
}

void check_alpha(Exponent alpha) {
  if (!(alpha.value() > 0.0 && alpha.value() < 1.0)) {
    throw DomainError("coefficient filter exponent must lie in (0, 1)");
  }
}

// floor(x), snapping values within 1e-9 below an integer up to it; the
// bound sqrt(N)/q is an exact integer for many (N, q) but arrives here
// through a floating-point pi.
std::int64_t robust_floor(long double x) {
  const long double r = std::round(x);
  if (std::abs(x - r) < 1e-9L) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

std::int64_t max_shift(std::uint64_t n, std::uint32_t q, double q_bound) {
  return robust_floor(4.0L * kPiL * static_cast<long double>(n) /
                      (static_cast<long double>(q) * q_bound));
}

void check_q_bound(std::uint64_t n, double q_bound) {
  if (n < 1) throw DomainError("discretization: N must be >= 1");
  if (!(q_bound >= 2.0 && q_bound <= 4.0 * kPiL * static_cast<long double>(n))) {
    throw DomainError("discretization: Q = " + std::to_string(q_bound) +
                      " outside [2, 4 pi N]");
  }
}

}  // namespace

CoefficientFilter CoefficientFilter::rough_at_least(Exponent alpha) {
  check_alpha(alpha);
  return CoefficientFilter(Kind::RoughAtLeast, alpha);
}

CoefficientFilter CoefficientFilter::smooth_at_most(Exponent alpha) {
  check_alpha(alpha);
  return CoefficientFilter(Kind::SmoothAtMost, alpha);
}

bool CoefficientFilter::keeps(std::uint64_t n, std::uint64_t big_n,
                              const ntcore::PrimeTable& table) const {
  if (kind_ == Kind::All) return true;
  const std::uint64_t threshold = ntcore::ceil_power(big_n, alpha_);
  const std::uint32_t largest = ntcore::largest_prime_factor(n, table);
  return kind_ == Kind::RoughAtLeast ? largest >= threshold : largest < threshold;
}

std::vector<std::complex<double>> CoefficientFilter::apply(const rmf::RmfValues& values,
                                                           const ntcore::PrimeTable& table) const {
  std::vector<std::complex<double>> out = values.values;
  if (kind_ == Kind::All) return out;
  table.check_range(values.n, "CoefficientFilter::apply");
  const std::uint64_t threshold = ntcore::ceil_power(values.n, alpha_);
  const bool rough = kind_ == Kind::RoughAtLeast;
  for (std::uint32_t n = 1; n <= values.n; ++n) {
    const bool above = table.lpf(n) >= threshold;
    if (above != rough) out[n] = 0.0;
  }
  return out;
}

std::complex<double> eval_point(Coefficients coeffs, double theta) {
  if (coeffs.size() < 2) throw DomainError("eval_point: need N >= 1 coefficients");
  const std::size_t n = coeffs.size() - 1;
  CompensatedComplexSum acc;
  for (std::size_t k = 1; k <= n; ++k) {
    if (coeffs[k] == 0.0) continue;
    acc += coeffs[k] * unit_phase(static_cast<long long>(k), theta);
  }
  return acc.value() / std::sqrt(static_cast<double>(n));
}

std::complex<double> eval_point(const rmf::RmfValues& values, const CoefficientFilter& filter,
                                double theta, const ntcore::PrimeTable& table) {
  if (filter.kind() == CoefficientFilter::Kind::All) return eval_point(values.values, theta);
  return eval_point(filter.apply(values, table), theta);
}

std::size_t next_admissible_size(std::size_t m) {
  for (std::size_t candidate = std::max<std::size_t>(m, 1);; ++candidate) {
    std::size_t rest = candidate;
    for (const std::size_t p : {2, 3, 5, 7}) {
      while (rest % p == 0) rest /= p;
    }
    if (rest == 1) return candidate;
  }
}

GridEvaluation eval_grid_fft(Coefficients coeffs, std::size_t m, CoefficientFilter filter) {
  if (coeffs.size() < 2) throw DomainError("eval_grid_fft: need N >= 1 coefficients");
  const std::size_t n = coeffs.size() - 1;
  if (m < n + 1) {
    throw DomainError("eval_grid_fft: grid size " + std::to_string(m) + " below N + 1 = " +
                      std::to_string(n + 1));
  }
  GridEvaluation out{.n = static_cast<std::uint32_t>(n),
                     .requested_size = m,
                     .size = next_admissible_size(m),
                     .oversample = 0.0,
                     .filter = filter,
                     .values = {}};
  const std::size_t size = out.size;
  out.oversample = static_cast<double>(size) / static_cast<double>(n);

  auto in = fftw_buffer(size);
  auto spectrum = fftw_buffer(size);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(size), in.get(), spectrum.get(), FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw ResourceError("eval_grid_fft: FFTW planning failed");
  for (std::size_t k = 0; k < size; ++k) {
    const std::complex<double> a = (k >= 1 && k <= n) ? coeffs[k] : 0.0;
    in[k][0] = a.real();
    in[k][1] = a.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  out.values.resize(size);
  for (std::size_t j = 0; j < size; ++j) {
    out.values[j] = {spectrum[j][0] * scale, spectrum[j][1] * scale};
  }
  return out;
}

GridEvaluation eval_grid_fft(const rmf::RmfValues& values, const CoefficientFilter& filter,
                             std::size_t m, const ntcore::PrimeTable& table) {
  if (filter.kind() == CoefficientFilter::Kind::All) return eval_grid_fft(values.values, m, filter);
  return eval_grid_fft(filter.apply(values, table), m, filter);
}

MaxModulus max_modulus(Coefficients coeffs, double oversample) {
  if (!(oversample >= kBernsteinOversample - 1e-12)) {
    throw DomainError("max_modulus: oversample must be >= 4 pi");
  }
  const std::size_t n = coeffs.size() - 1;
  const auto m = static_cast<std::size_t>(std::ceil(oversample * static_cast<double>(n)));
  const auto grid = eval_grid_fft(coeffs, std::max(m, n + 1));
  MaxModulus best{.theta_star = 0.0, .magnitude = -1.0, .index = 0, .grid_size = grid.size};
  for (std::size_t j = 0; j < grid.size; ++j) {
    const double mag = std::abs(grid.values[j]);
    if (mag > best.magnitude) {
      best.magnitude = mag;
      best.index = j;
    }
  }
  best.theta_star = static_cast<double>(best.index) / static_cast<double>(grid.size);
  return best;
}

MaxModulus max_modulus(const rmf::RmfValues& values, const CoefficientFilter& filter,
                       double oversample, const ntcore::PrimeTable& table) {
  if (filter.kind() == CoefficientFilter::Kind::All) return max_modulus(values.values, oversample);
  return max_modulus(filter.apply(values, table), oversample);
}

double discretization_theta(std::uint32_t a, std::uint32_t q, std::int64_t j, std::uint64_t n) {
  const long double x = static_cast<long double>(a) / q +
                        static_cast<long double>(j) / (4.0L * kPiL * static_cast<long double>(n));
  const long double frac = x - std::floor(x);
  const auto theta = static_cast<double>(frac);
  return theta >= 1.0 ? 0.0 : theta;
}

double default_denominator_bound(std::uint64_t n) {
  return static_cast<double>(4.0L * kPiL * std::sqrt(static_cast<long double>(n)));
}

void for_each_discretization_point(std::uint64_t n, double q_bound,
                                   const std::function<void(const DiscretizationPoint&)>& visit) {
  check_q_bound(n, q_bound);
  const auto q_max = static_cast<std::uint32_t>(std::floor(q_bound));
  for (std::uint32_t q = 1; q <= q_max; ++q) {
    const std::int64_t j_max = max_shift(n, q, q_bound);
    for (std::uint32_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      for (std::int64_t j = -j_max; j <= j_max; ++j) {
        visit({a, q, j, discretization_theta(a, q, j, n)});
      }
    }
  }
}

std::uint64_t discretization_size(std::uint64_t n, double q_bound) {
  check_q_bound(n, q_bound);
  const auto q_max = static_cast<std::uint32_t>(std::floor(q_bound));
  std::uint64_t total = 0;
  for (std::uint32_t q = 1; q <= q_max; ++q) {
    std::uint64_t phi = 0;
    for (std::uint32_t a = 1; a <= q; ++a) phi += std::gcd(a, q) == 1 ? 1 : 0;
    total += phi * static_cast<std::uint64_t>(2 * max_shift(n, q, q_bound) + 1);
  }
  return total;
}

namespace {

void sort_and_dedupe(std::vector<DiscretizationPoint>& points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& x, const auto& y) { return x.theta < y.theta; });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const auto& x, const auto& y) { return x.theta == y.theta; }),
               points.end());
}

}  // namespace

std::vector<DiscretizationPoint> build_discretization(std::uint64_t n, double q_bound) {
  if (n > kMaterializeLimit) {
    throw ResourceError("build_discretization: N = " + std::to_string(n) +
                        " above the materialization limit; use sample_discretization or "
                        "for_each_discretization_point");
  }
  std::vector<DiscretizationPoint> points;
  points.reserve(discretization_size(n, q_bound));
  for_each_discretization_point(n, q_bound, [&](const DiscretizationPoint& p) { points.push_back(p); });
  sort_and_dedupe(points);
  return points;
}

std::vector<DiscretizationPoint> sample_discretization(std::uint64_t n, double q_bound,
                                                       std::uint64_t count, std::uint64_t seed) {
  const std::uint64_t total = discretization_size(n, q_bound);
  if (count >= total) {
    std::vector<DiscretizationPoint> all;
    all.reserve(total);
    for_each_discretization_point(n, q_bound, [&](const DiscretizationPoint& p) { all.push_back(p); });
    sort_and_dedupe(all);
    return all;
  }
  // Floyd's algorithm: `count` distinct ranks out of [0, total).
  CounterEngine engine(seed, 0xD15C'0000ull);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = total - count; j < total; ++j) {
    const std::uint64_t t = uniform_below(engine, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ranks(chosen.begin(), chosen.end());
  std::sort(ranks.begin(), ranks.end());

  std::vector<DiscretizationPoint> picked;
  picked.reserve(count);
  std::uint64_t rank = 0;
  std::size_t next = 0;
  for_each_discretization_point(n, q_bound, [&](const DiscretizationPoint& p) {
    if (next < ranks.size() && ranks[next] == rank) {
      picked.push_back(p);
      ++next;
    }
    ++rank;
  });
  sort_and_dedupe(picked);
  return picked;
}

ThetaSetA build_theta_set_a(std::uint64_t n, const ntcore::PrimeTable& table) {
  if (n < 2) throw DomainError("build_theta_set_a: N must be >= 2");
  const std::uint64_t q_lo = ntcore::ceil_power(n, Exponent(1, 2));
  const std::uint64_t q_hi = ntcore::floor_power(4 * n, Exponent(1, 2));
  if (q_hi > table.limit()) {
    throw ResourceError("build_theta_set_a: sieve limit " + std::to_string(table.limit()) +
                        " below 2 sqrt(N)");
  }
  const auto q_candidates = table.primes_between(q_lo, q_hi);
  if (q_candidates.empty()) throw DomainError("build_theta_set_a: no prime in [sqrt N, 2 sqrt N]");

  ThetaSetA out;
  out.q = q_candidates.front();
  const std::uint64_t count = ntcore::floor_power(n, Exponent(1, 8));
  const std::uint64_t start = ntcore::floor_power(n, Exponent(1, 7)) + 1;
  const auto first = std::lower_bound(table.primes().begin(), table.primes().end(), start);
  if (static_cast<std::uint64_t>(table.primes().end() - first) < count) {
    throw ResourceError("build_theta_set_a: sieve limit too small for the first " +
                        std::to_string(count) + " primes above N^{1/7}");
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t p = *(first + static_cast<std::ptrdiff_t>(i));
    out.numerators.push_back(p);
    out.thetas.push_back(static_cast<double>(p % out.q) / out.q);
  }
  return out;
}

std::complex<double> rough_sum_by_r(const rmf::RmfValues& values, double theta, Exponent alpha,
                                    const ntcore::PrimeTable& table) {
  if (!(alpha.value() > 0.5 && alpha.value() < 1.0)) {
    throw DomainError("rough_sum_by_r: alpha must lie in (1/2, 1)");
  }
  const std::uint64_t n = values.n;
  table.check_range(n, "rough_sum_by_r");
  const std::uint64_t p_min = ntcore::ceil_power(n, alpha);
  const std::uint64_t r_max = n / p_min;
  CompensatedComplexSum acc;
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    const std::uint64_t lo = std::max(n / (r + 1) + 1, p_min);
    for (const std::uint32_t p : table.primes_between(lo, n / r)) {
      const std::complex<double> step = unit_phase(static_cast<long long>(p), theta);
      std::complex<double> phase = step;
      std::complex<double> inner = values[1] * phase;
      for (std::uint64_t m = 2; m <= r; ++m) {
        phase *= step;
        inner += values[m] * phase;
      }
      acc += values[p] * inner;
    }
  }
  return acc.value() / std::sqrt(static_cast<double>(n));
}

}  // namespace rmflab::expsum
