#pragma once

#include <type_traits>
#include <vector>

#include "ssam/filter.hpp"
#include "ssam/grid.hpp"

// Brute-force reference implementations. These are the ground truth for
// every kernel: direct sums, no tiling, no lane arithmetic, deliberately
// sharing nothing with the execution path they check.

namespace ssam::oracle {

namespace detail {

// Oracles accumulate in double for floating inputs, natively for integers.
template <class T>
using Acc = std::conditional_t<std::is_floating_point_v<T>, double, T>;

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

template <class T>
T sample2d(const Grid2D<T>& g, int x, int y, Boundary b) {
  if (x >= 0 && x < g.width && y >= 0 && y < g.height) return g.at(x, y);
  if (b == Boundary::zero) return T{};
  return g.at(clamp_index(x, g.width), clamp_index(y, g.height));
}

template <class T>
T sample1d(const std::vector<T>& v, int i, Boundary b) {
  const int n = static_cast<int>(v.size());
  if (i >= 0 && i < n) return v[i];
  if (b == Boundary::zero) return T{};
  return v[clamp_index(i, n)];
}

}  // namespace detail

// True 2D convolution per the canonical double sum, filter flipped, window
// centered with the extra cell on the low side for even sizes:
//   out(x, y) = sum_{s, t} in(x + ax - s, y + ay - t) * w(s, t)
// with ax = (m-1)/2, ay = (n-1)/2.
template <class T>
Grid2D<T> conv2d_naive(const Grid2D<T>& in, const Filter2D<T>& f, Boundary boundary) {
  Grid2D<T> out(in.width, in.height);
  const int ax = f.anchor_x(), ay = f.anchor_y();
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) {
      detail::Acc<T> sum{};
      for (int s = 0; s < f.m; ++s)
        for (int t = 0; t < f.n; ++t)
          sum += static_cast<detail::Acc<T>>(
                     detail::sample2d(in, x + ax - s, y + ay - t, boundary)) *
                 static_cast<detail::Acc<T>>(f.at(s, t));
      out.at(x, y) = static_cast<T>(sum);
    }
  return out;
}

template <class T>
std::vector<T> conv1d_naive(const std::vector<T>& signal, const std::vector<T>& filter,
                            Boundary boundary) {
  const int m = static_cast<int>(filter.size());
  const int ax = (m - 1) / 2;
  std::vector<T> out(signal.size());
  for (int i = 0; i < static_cast<int>(signal.size()); ++i) {
    detail::Acc<T> sum{};
    for (int s = 0; s < m; ++s)
      sum += static_cast<detail::Acc<T>>(detail::sample1d(signal, i + ax - s, boundary)) *
             static_cast<detail::Acc<T>>(filter[s]);
    out[i] = static_cast<T>(sum);
  }
  return out;
}

// Jacobi sweeps: each iteration reads generation i and writes generation
// i+1, updating only cells whose whole neighborhood is in the domain; the
// boundary ring of width k carries over unchanged.
template <class T>
Grid2D<T> stencil2d_naive(const Grid2D<T>& in, const Stencil<T>& st, int iters) {
  const int k = st.order;
  Grid2D<T> cur = in, next = in;
  for (int it = 0; it < iters; ++it) {
    for (int y = k; y < cur.height - k; ++y)
      for (int x = k; x < cur.width - k; ++x) {
        detail::Acc<T> sum{};
        for (const auto& tap : st.taps)
          sum += static_cast<detail::Acc<T>>(cur.at(x + tap.offset[0], y + tap.offset[1])) *
                 static_cast<detail::Acc<T>>(tap.coeff);
        next.at(x, y) = static_cast<T>(sum);
      }
    std::swap(cur, next);
  }
  return cur;
}

template <class T>
Grid3D<T> stencil3d_naive(const Grid3D<T>& in, const Stencil<T>& st, int iters) {
  const int k = st.order;
  Grid3D<T> cur = in, next = in;
  for (int it = 0; it < iters; ++it) {
    for (int z = k; z < cur.nz - k; ++z)
      for (int y = k; y < cur.ny - k; ++y)
        for (int x = k; x < cur.nx - k; ++x) {
          detail::Acc<T> sum{};
          for (const auto& tap : st.taps)
            sum += static_cast<detail::Acc<T>>(
                       cur.at(x + tap.offset[0], y + tap.offset[1], z + tap.offset[2])) *
                   static_cast<detail::Acc<T>>(tap.coeff);
          next.at(x, y, z) = static_cast<T>(sum);
        }
    std::swap(cur, next);
  }
  return cur;
}

template <class T>
std::vector<T> scan_naive(const std::vector<T>& values) {
  std::vector<T> out(values.size());
  detail::Acc<T> running{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    running += static_cast<detail::Acc<T>>(values[i]);
    out[i] = static_cast<T>(running);
  }
  return out;
}

}  // namespace ssam::oracle
