#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ssam/rng.hpp"

namespace ssam {

// Row-major 2D grid: data[y * width + x].
template <class T>
struct Grid2D {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid2D() = default;
  Grid2D(int w, int h, T fill = T{}) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("grid2d: dimensions must be >= 1");
    data.assign(static_cast<std::size_t>(w) * h, fill);
  }

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

// 3D grid, x fastest: data[(z * ny + y) * nx + x].
template <class T>
struct Grid3D {
  int nx = 0, ny = 0, nz = 0;
  std::vector<T> data;

  Grid3D() = default;
  Grid3D(int x, int y, int z, T fill = T{}) : nx(x), ny(y), nz(z) {
    if (x < 1 || y < 1 || z < 1) throw std::invalid_argument("grid3d: dimensions must be >= 1");
    data.assign(static_cast<std::size_t>(x) * y * z, fill);
  }

  T& at(int x, int y, int z) {
    return data[(static_cast<std::size_t>(z) * ny + y) * nx + x];
  }
  const T& at(int x, int y, int z) const {
    return data[(static_cast<std::size_t>(z) * ny + y) * nx + x];
  }

  friend bool operator==(const Grid3D&, const Grid3D&) = default;
};

template <class T>
Grid2D<T> random_grid2d(int w, int h, std::uint64_t seed) {
  Grid2D<T> g(w, h);
  SplitMix64 rng(seed);
  for (T& v : g.data) v = rng.template next_scalar<T>();
  return g;
}

template <class T>
Grid3D<T> random_grid3d(int nx, int ny, int nz, std::uint64_t seed) {
  Grid3D<T> g(nx, ny, nz);
  SplitMix64 rng(seed);
  for (T& v : g.data) v = rng.template next_scalar<T>();
  return g;
}

}  // namespace ssam
