#pragma once

#include <cmath>
#include <cstdint>

namespace wedgetact {

// Counter-based random streams. Every ray owns an independent stream derived
// from (key, global ray index), so a trace over rays [first, first+n) can be
// partitioned arbitrarily across threads or across separate trace calls and
// still draw exactly the same numbers per ray.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-ray random stream: splitmix64 seeded by hashing (key, counter).
class RayRng {
 public:
  RayRng(std::uint64_t key, std::uint64_t counter) {
    state_ = key ^ 0x6a09e667f3bcc909ULL;
    splitmix64(state_);
    state_ ^= counter * 0x2545f4914f6cdd1dULL;
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller (one value per call, second discarded).
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
  }

 private:
  std::uint64_t state_;
};

/// Identifies a contiguous block of ray streams: ray i of a trace draws from
/// RayRng(key, first_ray + i). Splitting a trace of n rays in half yields
/// {key, first_ray} and {key, first_ray + n/2}.
struct StreamSeed {
  std::uint64_t key = 0;
  std::uint64_t first_ray = 0;
};

inline StreamSeed split_lo(StreamSeed s, std::uint64_t /*n_total*/) { return s; }
inline StreamSeed split_hi(StreamSeed s, std::uint64_t n_lo) {
  return {s.key, s.first_ray + n_lo};
}

}  // namespace wedgetact
