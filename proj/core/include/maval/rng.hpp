#pragma once

#include <cstdint>
#include <random>

#include "maval/error.hpp"
#include "maval/rational.hpp"

namespace maval {

// Seeded pseudo-random source with platform-independent mappings: integers use
// explicit modulo reduction and reals use the top 53 bits of the raw stream,
// so identical seeds give identical draws on every standard library.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t raw() { return eng_(); }

  // Uniform-ish integer in [lo, hi], inclusive.
  int64_t integer(int64_t lo, int64_t hi) {
    require_domain(lo <= hi, "Rng::integer: empty range");
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(eng_() % span);
  }

  double real01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Real in [lo, hi).
  double real(double lo, double hi) { return lo + (hi - lo) * real01(); }

  Rational rational(int64_t lo, int64_t hi, int64_t max_den = 8) {
    const int64_t den = integer(1, max_den);
    const int64_t num = integer(lo * den, hi * den);
    return Rational(num) / Rational(den);
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace maval
