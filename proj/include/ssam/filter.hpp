#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ssam/rng.hpp"

namespace ssam {

enum class Boundary { zero, replicate };

// Dense convolution filter: m taps across lanes (x), n taps along each
// lane's register cache (y). Stored as m column vectors of length n, the
// order the warp consumes them.
template <class T>
struct Filter2D {
  int m = 1;
  int n = 1;
  std::vector<T> w;  // w[s * n + t], s in [0, m), t in [0, n)

  Filter2D() : w(1, T{1}) {}
  Filter2D(int m_, int n_, std::vector<T> weights) : m(m_), n(n_), w(std::move(weights)) {
    if (m < 1 || n < 1) throw std::invalid_argument("filter: taps must be >= 1");
    if (w.size() != static_cast<std::size_t>(m) * n)
      throw std::invalid_argument("filter: weight count does not match m x n");
  }

  T at(int s, int t) const { return w[static_cast<std::size_t>(s) * n + t]; }

  // Anchors: output (x, y) folds input columns [x - ax_hi, x + ax_lo] where
  // the window is centered with the extra cell on the left for even sizes.
  int anchor_x() const { return (m - 1) / 2; }
  int anchor_y() const { return (n - 1) / 2; }
};

template <class T>
Filter2D<T> random_filter(int m, int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<T> w(static_cast<std::size_t>(m) * n);
  for (T& v : w) v = rng.template next_coeff<T>();
  return Filter2D<T>(m, n, std::move(w));
}

// Sparse stencil: a list of (offset, coefficient) taps. `order` is the
// largest absolute offset component; `fpp` carries the benchmark's
// FLOP-per-point figure where one is defined.
template <class T>
struct StencilTap {
  std::array<int, 3> offset{0, 0, 0};  // dx, dy, dz (dz unused for 2D)
  T coeff{};
};

template <class T>
struct Stencil {
  std::string name;
  int dims = 2;  // 2 or 3
  int order = 0;
  int fpp = 0;
  std::vector<StencilTap<T>> taps;
};

template <class T>
int stencil_order_of(const std::vector<StencilTap<T>>& taps) {
  int k = 0;
  for (const auto& t : taps)
    for (int c = 0; c < 3; ++c)
      k = std::max(k, std::abs(t.offset[c]));
  return k;
}

template <class T>
void validate_stencil(const Stencil<T>& st) {
  if (st.dims != 2 && st.dims != 3)
    throw std::invalid_argument("stencil: dims must be 2 or 3");
  if (st.taps.empty()) throw std::invalid_argument("stencil: no taps");
  for (const auto& t : st.taps) {
    if (st.dims == 2 && t.offset[2] != 0)
      throw std::invalid_argument("stencil: 2D stencil has a z offset");
    for (int c = 0; c < 3; ++c)
      if (std::abs(t.offset[c]) > st.order)
        throw std::invalid_argument("stencil: offset outside declared order");
  }
  if (stencil_order_of(st.taps) != st.order)
    throw std::invalid_argument("stencil: declared order does not match taps");
  for (std::size_t i = 0; i < st.taps.size(); ++i)
    for (std::size_t j = i + 1; j < st.taps.size(); ++j)
      if (st.taps[i].offset == st.taps[j].offset)
        throw std::invalid_argument("stencil: duplicate tap offset");
}

// The named stencil benchmarks (stars and boxes of various orders plus the
// 19-point poisson kernel), with coefficients that form an asymmetric
// convex combination: tap j of t off-center taps weighs j / (2 * sum(1..t))
// and the center carries the remaining 1/2.
Stencil<double> make_benchmark_stencil(std::string_view name);
const std::vector<std::string>& benchmark_stencil_names();
bool is_3d_benchmark(std::string_view name);

template <class T>
Stencil<T> convert_stencil(const Stencil<double>& in) {
  Stencil<T> out;
  out.name = in.name;
  out.dims = in.dims;
  out.order = in.order;
  out.fpp = in.fpp;
  out.taps.reserve(in.taps.size());
  for (const auto& t : in.taps)
    out.taps.push_back({t.offset, static_cast<T>(t.coeff)});
  return out;
}

// Per-run execution parameters. C = n + p - 1 registers get cached per
// lane; the cap mirrors the hardware's per-thread register ceiling.
struct KernelConfig {
  int p = 4;                          // outputs per lane per tile (sliding-window steps)
  int b = 128;                        // block size in threads
  Boundary boundary = Boundary::zero;
  int lane_count = 32;                // warp size S
  int threads = 0;                    // worker threads for block execution; 0 = all

  static constexpr int kCacheCap = 255;

  int warp_count() const { return b / lane_count; }

  void check(int filter_n) const {
    if (p < 1) throw std::invalid_argument("config: p must be >= 1");
    if (lane_count < 2 || lane_count > 64 || (lane_count & (lane_count - 1)) != 0)
      throw std::invalid_argument("config: lane_count must be a power of two in [2, 64]");
    if (b < lane_count || b % lane_count != 0)
      throw std::invalid_argument("config: b must be a positive multiple of lane_count");
    if (filter_n + p - 1 > kCacheCap)
      throw std::length_error("config: register cache C = n + p - 1 exceeds the cap");
  }
};

}  // namespace ssam
