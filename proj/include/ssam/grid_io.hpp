#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>

#include "ssam/grid.hpp"

namespace ssam {

// Flat binary grid format, little-endian scalars after a 16-byte header:
//   [0..3]   magic "SGRD"
//   [4]      format version (1)
//   [5]      rank (1, 2 or 3)
//   [6]      scalar code: 1 = f32, 2 = f64, 3 = i64
//   [7]      reserved (0)
//   [8..13]  dims as u16 (d0, d1, d2; unused dims = 1)
//   [14..15] reserved (0)
// d0 is the fastest-varying dimension (x / width).

namespace detail {

template <class T>
constexpr std::uint8_t scalar_code() {
  if constexpr (std::is_same_v<T, float>) return 1;
  else if constexpr (std::is_same_v<T, double>) return 2;
  else return 3;
}

inline void put_u16(char* p, std::uint16_t v) {
  p[0] = static_cast<char>(v & 0xff);
  p[1] = static_cast<char>(v >> 8);
}
inline std::uint16_t get_u16(const char* p) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(p[0])) |
         static_cast<std::uint16_t>(static_cast<unsigned char>(p[1])) << 8;
}

template <class T>
void write_header(std::ostream& os, int rank, int d0, int d1, int d2) {
  if (d0 > 0xffff || d1 > 0xffff || d2 > 0xffff)
    throw std::invalid_argument("grid io: dimension exceeds format limit (65535)");
  char h[16] = {'S', 'G', 'R', 'D', 1, static_cast<char>(rank),
                static_cast<char>(scalar_code<T>()), 0};
  put_u16(h + 8, static_cast<std::uint16_t>(d0));
  put_u16(h + 10, static_cast<std::uint16_t>(d1));
  put_u16(h + 12, static_cast<std::uint16_t>(d2));
  os.write(h, sizeof h);
}

template <class T>
void read_header(std::istream& is, int expect_rank, int& d0, int& d1, int& d2) {
  char h[16];
  is.read(h, sizeof h);
  if (!is || std::memcmp(h, "SGRD", 4) != 0)
    throw std::runtime_error("grid io: bad magic or truncated header");
  if (h[4] != 1) throw std::runtime_error("grid io: unsupported format version");
  if (h[5] != expect_rank) throw std::runtime_error("grid io: rank mismatch");
  if (static_cast<std::uint8_t>(h[6]) != scalar_code<T>())
    throw std::runtime_error("grid io: scalar type mismatch");
  d0 = get_u16(h + 8);
  d1 = get_u16(h + 10);
  d2 = get_u16(h + 12);
}

template <class T>
void write_scalars(std::ostream& os, const std::vector<T>& v) {
  // Host is little-endian on every supported platform; write raw.
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
void read_scalars(std::istream& is, std::vector<T>& v) {
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(T)));
  if (!is) throw std::runtime_error("grid io: truncated payload");
}

}  // namespace detail

template <class T>
void write_grid(std::ostream& os, const Grid2D<T>& g) {
  detail::write_header<T>(os, 2, g.width, g.height, 1);
  detail::write_scalars(os, g.data);
}

template <class T>
void write_grid(std::ostream& os, const Grid3D<T>& g) {
  detail::write_header<T>(os, 3, g.nx, g.ny, g.nz);
  detail::write_scalars(os, g.data);
}

template <class T>
void write_grid(std::ostream& os, const std::vector<T>& v) {
  detail::write_header<T>(os, 1, static_cast<int>(v.size()), 1, 1);
  detail::write_scalars(os, v);
}

template <class T>
Grid2D<T> read_grid2d(std::istream& is) {
  int d0, d1, d2;
  detail::read_header<T>(is, 2, d0, d1, d2);
  Grid2D<T> g(d0, d1);
  detail::read_scalars(is, g.data);
  return g;
}

template <class T>
Grid3D<T> read_grid3d(std::istream& is) {
  int d0, d1, d2;
  detail::read_header<T>(is, 3, d0, d1, d2);
  Grid3D<T> g(d0, d1, d2);
  detail::read_scalars(is, g.data);
  return g;
}

template <class T>
std::vector<T> read_vector(std::istream& is) {
  int d0, d1, d2;
  detail::read_header<T>(is, 1, d0, d1, d2);
  std::vector<T> v(static_cast<std::size_t>(d0));
  detail::read_scalars(is, v);
  return v;
}

template <class T, class GridLike>
void write_grid_file(const std::string& path, const GridLike& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("grid io: cannot open " + path + " for writing");
  write_grid(os, g);
}

// Plain-text 2D fixture format: "W H" on the first line, then H rows of
// W whitespace-separated values.
template <class T>
void write_grid_text(std::ostream& os, const Grid2D<T>& g) {
  os.precision(17);
  os << g.width << " " << g.height << "\n";
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) os << (x ? " " : "") << +g.at(x, y);
    os << "\n";
  }
}

template <class T>
Grid2D<T> read_grid_text(std::istream& is) {
  int w = 0, h = 0;
  if (!(is >> w >> h) || w < 1 || h < 1)
    throw std::runtime_error("grid io: bad text header");
  Grid2D<T> g(w, h);
  for (T& v : g.data)
    if (!(is >> v)) throw std::runtime_error("grid io: truncated text grid");
  return g;
}

}  // namespace ssam
