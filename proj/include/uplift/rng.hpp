#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace uplift::rng {

// splitmix64 finalizer; the basis of all counter-based streams below.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t a, std::uint64_t b) {
  return mix(mix(a) ^ b);
}
inline std::uint64_t key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(key(a, b) ^ c);
}
inline std::uint64_t key(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t d) {
  return mix(key(a, b, c) ^ d);
}

// Uniform in (0,1): 53-bit mantissa, offset by half an ulp so 0 is excluded.
inline double to_unit(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::uint64_t k) { return to_unit(mix(k)); }

// Standard normal from a single key via Box-Muller (cosine branch).
inline double gaussian(std::uint64_t k) {
  const double u1 = to_unit(mix(k));
  const double u2 = to_unit(mix(k ^ 0x5851f42d4c957f2dull));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential stream for consumers that need many draws (tree growing,
// shuffles). Each stream is keyed once and then advances a counter, so
// streams derived from distinct keys are independent of execution order.
class Stream {
 public:
  explicit Stream(std::uint64_t k) : key_(k) {}

  std::uint64_t next_u64() { return mix(key_ ^ counter_++); }
  double uniform() { return to_unit(next_u64()); }
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
  // Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace uplift::rng
