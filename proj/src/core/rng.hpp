#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace vc {

// Seedable PRNG with distributions implemented by hand so that a given seed
// produces the same stream on every standard library.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  // Box-Muller; draws exactly two uniforms per call.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  // Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n) {
    return gen_() % n;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace vc
