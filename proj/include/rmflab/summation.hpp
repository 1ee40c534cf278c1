#pragma once

#include <cmath>
#include <complex>

namespace rmflab {

// Neumaier's variant of Kahan summation. Carries a running error term so
// long series of mixed-magnitude terms keep close to full double accuracy.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }

  CompensatedComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

constexpr double kTwoPi = 6.283185307179586476925286766559;

// e(x) = exp(2 pi i x), with x reduced mod 1 before the trig call.
inline std::complex<double> unit_phase(double x) {
  const double frac = x - std::floor(x);
  return std::polar(1.0, kTwoPi * frac);
}

// e(n * theta) for integer n without forming the rounded product n*theta in
// double: the fractional part is taken in long double first.
inline std::complex<double> unit_phase(long long n, double theta) {
  const long double prod = static_cast<long double>(n) * theta;
  const long double frac = prod - std::floor(prod);
  return std::polar(1.0, kTwoPi * static_cast<double>(frac));
}

}  // namespace rmflab
