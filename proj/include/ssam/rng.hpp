#pragma once

#include <cstdint>
#include <type_traits>

namespace ssam {

// splitmix64: tiny, seedable, and bit-reproducible on every platform and
// standard library. All randomized inputs (grids, filters, test sweeps)
// come from here so identical seeds give identical bytes everywhere.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi] (inclusive). Modulo bias is irrelevant at our ranges.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Uniform in [-1, 1).
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0;
  }

  template <class T>
  T next_scalar() {
    if constexpr (std::is_integral_v<T>) {
      return static_cast<T>(next_int(-100, 100));
    } else {
      return static_cast<T>(next_unit());
    }
  }

  // Small-magnitude values used for filter/stencil coefficients.
  template <class T>
  T next_coeff() {
    if constexpr (std::is_integral_v<T>) {
      return static_cast<T>(next_int(-9, 9));
    } else {
      return static_cast<T>(next_unit());
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace ssam
