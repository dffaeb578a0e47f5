#pragma once

#include <cmath>
#include <cstdint>

namespace wfa {

// SplitMix64 stream. Fully specified here so that seeded runs produce
// identical bytes on every platform; the standard-library distributions
// are implementation-defined and would break that promise.
//
// Independent per-work-item streams are derived from (seed, index), which
// keeps sampled results independent of scheduling and job count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

  static Rng derived(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed) ^ mix(0x632be59bd9b4e019ULL + index));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, bound); bound >= 1.
  int next_int(int bound) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound)); }

  int next_sign() { return (next_u64() >> 63) ? +1 : -1; }

  double next_normal() {
    // Box-Muller; the unused second deviate is dropped to keep the
    // stream position a simple function of the call count.
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace wfa
