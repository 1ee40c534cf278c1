#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rmflab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), so any value can be recomputed in
// isolation and parallel consumers never share state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

// Two 64-bit words keyed by a 64-bit seed at a 128-bit counter (hi, lo).
inline std::array<std::uint64_t, 2> counter_draw(std::uint64_t seed,
                                                 std::uint64_t hi,
                                                 std::uint64_t lo) {
  const Philox4x32::Key key = {static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32)};
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
      static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)};
  const auto out = Philox4x32::apply(ctr, key);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

// Uniform on [0, 1) with 53 random bits.
inline double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1], safe for log().
inline double to_open_unit_interval(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Two independent standard normals from one counter via Box-Muller.
inline std::array<double, 2> counter_normal_pair(std::uint64_t seed,
                                                 std::uint64_t hi,
                                                 std::uint64_t lo) {
  const auto w = counter_draw(seed, hi, lo);
  const double radius = std::sqrt(-2.0 * std::log(to_open_unit_interval(w[0])));
  const double angle = 6.283185307179586476925286766559 * to_unit_interval(w[1]);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Child seed for the index pair (a, b) under a master seed. Distinct pairs
// map through a bijection of the 128-bit counter, so collisions are only
// possible by 64-bit truncation of the Philox output.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b) {
  return counter_draw(master, a ^ 0x5EEDC0DE00000000ull, b)[0];
}

// Sequential engine over a counter stream; satisfies
// UniformRandomBitGenerator for use with <random> and <algorithm>.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  CounterEngine(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (slot_ == 2) {
      buffer_ = counter_draw(seed_, stream_, counter_++);
      slot_ = 0;
    }
    return buffer_[slot_++];
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int slot_ = 2;
};

// Uniform integer in [0, bound) by rejection; portable across standard
// libraries, unlike std::uniform_int_distribution.
template <class Engine>
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

}  // namespace rmflab
