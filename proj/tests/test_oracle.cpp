#include <vector>

#include "doctest.h"
#include "ssam/oracle.hpp"

using namespace ssam;

namespace {

Grid2D<long long> counting_grid(int w, int h) {
  Grid2D<long long> g(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g.at(x, y) = y * w + x + 1;
  return g;
}

}  // namespace

TEST_CASE("conv2d_naive identity filter") {
  auto g = counting_grid(6, 5);
  Filter2D<long long> ident;  // 1x1, weight 1
  CHECK(oracle::conv2d_naive(g, ident, Boundary::zero) == g);
}

TEST_CASE("conv2d_naive constant input times weight sum") {
  Grid2D<long long> g(8, 8, 3);
  Filter2D<long long> f(3, 3, {1, 2, 0, -1, 4, 2, 0, 1, 1});  // sums to 10
  auto out = oracle::conv2d_naive(g, f, Boundary::replicate);
  for (auto v : out.data) CHECK(v == 30);
}

// 3x3 filter on a 4x4 counting grid, worked by hand once and frozen.
// Filter columns (s, t indexing): w(0,*) = 1,2,3; w(1,*) = 4,5,6; w(2,*) = 7,8,9.
TEST_CASE("conv2d_naive hand-computed fixture") {
  auto g = counting_grid(4, 4);
  Filter2D<long long> f(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});

  auto zero = oracle::conv2d_naive(g, f, Boundary::zero);
  CHECK(zero.at(1, 1) == 228);
  CHECK(zero.at(2, 2) == 453);
  CHECK(zero.at(0, 0) == 35);
  CHECK(zero.at(3, 3) == 371);

  auto repl = oracle::conv2d_naive(g, f, Boundary::replicate);
  CHECK(repl.at(0, 0) == 99);
  CHECK(repl.at(1, 1) == 228);  // interior cells ignore the boundary policy
}

TEST_CASE("stencil2d_naive identity stencil") {
  auto g = counting_grid(5, 5);
  Stencil<long long> st;
  st.order = 0;
  st.taps = {{{0, 0, 0}, 1}};
  for (int iters : {1, 3}) CHECK(oracle::stencil2d_naive(g, st, iters) == g);
}

TEST_CASE("stencil2d_naive convex combination keeps constants") {
  Grid2D<double> g(7, 7, 2.5);
  Stencil<double> st;
  st.order = 1;
  st.taps = {{{0, 0, 0}, 0.2}, {{-1, 0, 0}, 0.2}, {{1, 0, 0}, 0.2},
             {{0, -1, 0}, 0.2}, {{0, 1, 0}, 0.2}};
  auto out = oracle::stencil2d_naive(g, st, 4);
  for (auto v : out.data) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

// Two sweeps of an asymmetric integer 5-point stencil on the 5x5 ramp
// in(x, y) = x + y, worked by hand once and frozen.
TEST_CASE("stencil2d_naive hand-computed two-sweep fixture") {
  Grid2D<long long> g(5, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) g.at(x, y) = x + y;

  Stencil<long long> st;
  st.order = 1;
  st.taps = {{{0, 0, 0}, 1}, {{-1, 0, 0}, 2}, {{1, 0, 0}, 3},
             {{0, -1, 0}, 4}, {{0, 1, 0}, 5}};

  auto out = oracle::stencil2d_naive(g, st, 2);
  const long long expect[5][5] = {
      {0, 1, 2, 3, 4},
      {1, 414, 615, 568, 5},
      {2, 675, 960, 927, 6},
      {3, 512, 755, 610, 7},
      {4, 5, 6, 7, 8},
  };
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) CHECK(out.at(x, y) == expect[y][x]);
}

TEST_CASE("stencil3d_naive identity and boundary ring") {
  Grid3D<long long> g(4, 4, 4);
  for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] = static_cast<long long>(i);
  Stencil<long long> st;
  st.dims = 3;
  st.order = 1;
  st.taps = {{{0, 0, 0}, 1}};
  CHECK(oracle::stencil3d_naive(g, st, 2) == g);

  // A non-trivial stencil still leaves the ring untouched.
  st.taps.push_back({{0, 0, 1}, 7});
  auto out = oracle::stencil3d_naive(g, st, 1);
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) {
        const bool interior = x >= 1 && x < 3 && y >= 1 && y < 3 && z >= 1 && z < 3;
        if (!interior) CHECK(out.at(x, y, z) == g.at(x, y, z));
        else CHECK(out.at(x, y, z) == g.at(x, y, z) + 7 * g.at(x, y, z + 1));
      }
}

TEST_CASE("scan_naive and conv1d_naive closed forms") {
  std::vector<long long> ones(10, 1);
  auto s = oracle::scan_naive(ones);
  for (int i = 0; i < 10; ++i) CHECK(s[i] == i + 1);

  std::vector<long long> ramp(100);
  for (int i = 0; i < 100; ++i) ramp[i] = i;
  auto pre = oracle::scan_naive(ramp);
  for (int i = 0; i < 100; ++i) CHECK(pre[i] == i * (i + 1) / 2);

  // Width-5 box filter on a ramp: interior output is 5x the center value.
  std::vector<long long> box(5, 1);
  auto c = oracle::conv1d_naive(ramp, box, Boundary::zero);
  for (int i = 2; i < 98; ++i) CHECK(c[i] == 5 * i);

  std::vector<long long> ident = {1};
  CHECK(oracle::conv1d_naive(ramp, ident, Boundary::zero) == ramp);
}
