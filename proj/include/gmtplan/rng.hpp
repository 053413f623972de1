#pragma once

#include <cmath>
#include <cstdint>

namespace gmt {

// PCG-XSH-RR 32-bit generator (Melissa O'Neill's minimal variant).  Chosen over
// std::mt19937 because its output for a given seed is pinned by this file, not by
// the standard library implementation, so sampled problems replay everywhere.
struct Pcg32 {
  std::uint64_t state = 0x853c49e6748fea9bULL;
  std::uint64_t inc = 0xda3e39cb94b95bdbULL;

  Pcg32() = default;
  explicit Pcg32(std::uint64_t seed, std::uint64_t seq = 0) {
    state = 0u;
    inc = (seq << 1u) | 1u;
    next_u32();
    state += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state;
    state = old * 6364136223846793005ULL + inc;
    std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // Uniform in [0, 1).
  double next_double() { return next_u32() * 0x1p-32; }

  // Box-Muller; the spare is cached so draws come in a fixed sequence.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  // Knuth's product method; fine for the small means used per control step.
  int poisson(double mean) {
    double limit = std::exp(-mean);
    double prod = next_double();
    int k = 0;
    while (prod > limit) {
      ++k;
      prod *= next_double();
    }
    return k;
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// splitmix64; used to derive independent stream seeds from counters.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }

}  // namespace gmt
