#include "rmflab/rmf.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <istream>
#include <ostream>
#include <string>

#include "rmflab/errors.hpp"
#include "rmflab/random.hpp"
#include "rmflab/summation.hpp"

namespace rmflab::rmf {

namespace {

// Counter layout: hi word tags the purpose, lo word is the prime.
constexpr std::uint64_t kPrimeStream = 0x52'4D'46'50ull;  // "RMFP"
constexpr std::uint64_t kSignStream = 0x52'4D'46'53ull;   // "RMFS"

constexpr char kMagic[4] = {'R', 'M', 'F', 'V'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t get_bytes(std::istream& in, int count) {
  unsigned char buf[8] = {};
  in.read(reinterpret_cast<char*>(buf), count);
  if (!in) throw DomainError("read_values: truncated input");
  std::uint64_t v = 0;
  for (int i = count - 1; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

std::string_view to_string(RmfKind kind) {
  return kind == RmfKind::Rademacher ? "rademacher" : "steinhaus";
}

RmfKind parse_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rademacher") return RmfKind::Rademacher;
  if (lower == "steinhaus") return RmfKind::Steinhaus;
  throw DomainError("unknown random multiplicative function kind: " + std::string(text));
}

std::complex<double> PrimeAssignment::at(std::uint32_t p) const {
  const auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p) {
    throw DomainError("PrimeAssignment::at: " + std::to_string(p) +
                      " is not a prime <= " + std::to_string(limit));
  }
  return values[static_cast<std::size_t>(it - primes.begin())];
}

std::complex<double> draw_prime_value(RmfKind kind, std::uint64_t seed, std::uint32_t p) {
  const auto bits = counter_draw(seed, kPrimeStream, p)[0];
  if (kind == RmfKind::Rademacher) {
    return (bits >> 63) != 0 ? 1.0 : -1.0;
  }
  return std::polar(1.0, kTwoPi * to_unit_interval(bits));
}

PrimeAssignment sample_prime_assignment(RmfKind kind, std::uint64_t limit,
                                        std::uint64_t seed,
                                        const ntcore::PrimeTable& table) {
  if (limit < 2) throw DomainError("sample_prime_assignment: limit must be >= 2");
  table.check_range(limit, "sample_prime_assignment");
  PrimeAssignment out;
  out.kind = kind;
  out.limit = static_cast<std::uint32_t>(limit);
  const auto primes = table.primes_between(2, limit);
  out.primes.assign(primes.begin(), primes.end());
  out.values.reserve(out.primes.size());
  for (const std::uint32_t p : out.primes) out.values.push_back(draw_prime_value(kind, seed, p));
  return out;
}

RmfValues extend(const PrimeAssignment& assignment, std::uint64_t n,
                 const ntcore::PrimeTable& table) {
  if (n < 1 || n > assignment.limit) {
    throw DomainError("extend: N = " + std::to_string(n) +
                      " exceeds the assignment limit " + std::to_string(assignment.limit));
  }
  table.check_range(n, "extend");
  const auto n32 = static_cast<std::uint32_t>(n);

  RmfValues out;
  out.kind = assignment.kind;
  out.n = n32;
  out.assignment = assignment;
  out.values.assign(std::size_t{n32} + 1, 0.0);
  auto& f = out.values;
  f[1] = 1.0;

  const bool rademacher = assignment.kind == RmfKind::Rademacher;
  std::size_t next_prime = 0;
  for (std::uint32_t m = 2; m <= n32; ++m) {
    const std::uint32_t p = table.spf(m);
    if (p == m) {
      if (next_prime >= assignment.primes.size() || assignment.primes[next_prime] != m) {
        throw DomainError("extend: assignment does not cover prime " + std::to_string(m));
      }
      f[m] = assignment.values[next_prime++];
      continue;
    }
    const std::uint32_t rest = m / p;
    if (rademacher && rest % p == 0) {
      f[m] = 0.0;
    } else {
      f[m] = f[p] * f[rest];
    }
  }
  return out;
}

RmfValues sample(RmfKind kind, std::uint64_t n, std::uint64_t seed,
                 const ntcore::PrimeTable& table) {
  const std::uint64_t limit = std::max<std::uint64_t>(n, 2);
  auto values = extend(sample_prime_assignment(kind, limit, seed, table), n, table);
  values.seed = seed;
  return values;
}

RmfValues resample_above_cutoff(const RmfValues& values, std::uint64_t cutoff,
                                std::uint64_t seed, const ntcore::PrimeTable& table) {
  if (cutoff < 1 || cutoff > values.n) {
    throw DomainError("resample_above_cutoff: cutoff must lie in [1, N]");
  }
  PrimeAssignment fresh = values.assignment;
  for (std::size_t i = 0; i < fresh.primes.size(); ++i) {
    if (fresh.primes[i] > cutoff) {
      fresh.values[i] = draw_prime_value(fresh.kind, seed, fresh.primes[i]);
    }
  }
  auto out = extend(fresh, values.n, table);
  out.seed = seed;
  return out;
}

RmfValues constant_stub(std::uint64_t n, std::complex<double> c, RmfKind kind) {
  RmfValues out;
  out.kind = kind;
  out.n = static_cast<std::uint32_t>(n);
  out.values.assign(n + 1, c);
  out.values[0] = 0.0;
  return out;
}

std::vector<std::complex<double>> independent_signs(std::uint64_t n, std::uint64_t seed) {
  std::vector<std::complex<double>> out(n + 1, 0.0);
  for (std::uint64_t i = 1; i <= n; ++i) {
    out[i] = (counter_draw(seed, kSignStream, i)[0] >> 63) != 0 ? 1.0 : -1.0;
  }
  return out;
}

void write_values(std::ostream& out, const RmfValues& values) {
  out.write(kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, values.kind == RmfKind::Rademacher ? 0u : 1u);
  put_u64(out, values.n);
  put_u64(out, values.seed);
  for (std::uint32_t i = 1; i <= values.n; ++i) {
    put_u64(out, std::bit_cast<std::uint64_t>(values.values[i].real()));
    put_u64(out, std::bit_cast<std::uint64_t>(values.values[i].imag()));
  }
}

RmfValues read_values(std::istream& in, const ntcore::PrimeTable& table) {
  char magic[4];
  in.read(magic, 4);
  if (!in || !std::equal(magic, magic + 4, kMagic)) {
    throw DomainError("read_values: bad magic");
  }
  if (get_bytes(in, 4) != kFormatVersion) throw DomainError("read_values: unsupported version");
  const auto kind_tag = get_bytes(in, 4);
  if (kind_tag > 1) throw DomainError("read_values: bad kind tag");
  const std::uint64_t n = get_bytes(in, 8);
  const std::uint64_t seed = get_bytes(in, 8);
  table.check_range(n, "read_values");

  RmfValues out;
  out.kind = kind_tag == 0 ? RmfKind::Rademacher : RmfKind::Steinhaus;
  out.n = static_cast<std::uint32_t>(n);
  out.seed = seed;
  out.values.assign(n + 1, 0.0);
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double re = std::bit_cast<double>(get_bytes(in, 8));
    const double im = std::bit_cast<double>(get_bytes(in, 8));
    out.values[i] = {re, im};
  }
  out.assignment.kind = out.kind;
  out.assignment.limit = out.n;
  for (const std::uint32_t p : table.primes_between(2, n)) {
    out.assignment.primes.push_back(p);
    out.assignment.values.push_back(out.values[p]);
  }
  return out;
}

}  // namespace rmflab::rmf
