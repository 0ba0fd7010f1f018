#pragma once

#include <cmath>
#include <cstdint>

namespace pointillist {

/// splitmix64: tiny deterministic generator with identical output on every
/// platform, which keeps generated corpora reproducible byte for byte.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double next_double() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  /// Knuth's method; fine for the modest rates used here.
  std::int64_t poisson(double lambda) {
    double limit = std::exp(-lambda);
    double p = 1.0;
    std::int64_t k = 0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace pointillist
