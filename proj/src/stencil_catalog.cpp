#include <algorithm>
#include <stdexcept>

#include "ssam/filter.hpp"

namespace ssam {

namespace {

struct BenchmarkDef {
  const char* name;
  int dims;
  int order;
  int fpp;
  enum Shape { star, box, box_even, poisson19 } shape;
};

// Star: center plus arms of length k along each axis. Box: full
// (2k+1)^dims cube. box_even: 8x8 box with offsets in [-4, 3] (the one
// 64-point benchmark). poisson19: 3x3x3 cube minus the 8 corners.
const BenchmarkDef kBenchmarks[] = {
    {"2d5pt", 2, 1, 9, BenchmarkDef::star},
    {"2d9pt", 2, 2, 17, BenchmarkDef::star},
    {"2d13pt", 2, 3, 25, BenchmarkDef::star},
    {"2d17pt", 2, 4, 33, BenchmarkDef::star},
    {"2d21pt", 2, 5, 41, BenchmarkDef::star},
    {"2ds25pt", 2, 6, 49, BenchmarkDef::star},
    {"2d25pt", 2, 2, 33, BenchmarkDef::box},
    {"2d64pt", 2, 4, 73, BenchmarkDef::box_even},
    {"2d81pt", 2, 4, 95, BenchmarkDef::box},
    {"2d121pt", 2, 5, 241, BenchmarkDef::box},
    {"3d7pt", 3, 1, 13, BenchmarkDef::star},
    {"3d13pt", 3, 2, 25, BenchmarkDef::star},
    {"3d27pt", 3, 1, 30, BenchmarkDef::box},
    {"3d125pt", 3, 2, 130, BenchmarkDef::box},
    {"poisson", 3, 1, 21, BenchmarkDef::poisson19},
};

std::vector<std::array<int, 3>> shape_offsets(const BenchmarkDef& def) {
  std::vector<std::array<int, 3>> offs;
  const int k = def.order;
  switch (def.shape) {
    case BenchmarkDef::star:
      offs.push_back({0, 0, 0});
      for (int i = 1; i <= k; ++i) {
        offs.push_back({-i, 0, 0});
        offs.push_back({i, 0, 0});
        offs.push_back({0, -i, 0});
        offs.push_back({0, i, 0});
        if (def.dims == 3) {
          offs.push_back({0, 0, -i});
          offs.push_back({0, 0, i});
        }
      }
      break;
    case BenchmarkDef::box: {
      const int zlo = def.dims == 3 ? -k : 0;
      const int zhi = def.dims == 3 ? k : 0;
      for (int dz = zlo; dz <= zhi; ++dz)
        for (int dy = -k; dy <= k; ++dy)
          for (int dx = -k; dx <= k; ++dx) offs.push_back({dx, dy, dz});
      break;
    }
    case BenchmarkDef::box_even:
      for (int dy = -4; dy <= 3; ++dy)
        for (int dx = -4; dx <= 3; ++dx) offs.push_back({dx, dy, 0});
      break;
    case BenchmarkDef::poisson19:
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx)
            if (std::abs(dx) + std::abs(dy) + std::abs(dz) <= 2)
              offs.push_back({dx, dy, dz});
      break;
  }
  return offs;
}

}  // namespace

Stencil<double> make_benchmark_stencil(std::string_view name) {
  const BenchmarkDef* def = nullptr;
  for (const auto& b : kBenchmarks)
    if (name == b.name) { def = &b; break; }
  if (!def) throw std::invalid_argument("unknown stencil benchmark: " + std::string(name));

  auto offs = shape_offsets(*def);
  // Canonical tap order: (dz, dy, dx) ascending, center pulled out last.
  std::sort(offs.begin(), offs.end(), [](const auto& a, const auto& b) {
    if (a[2] != b[2]) return a[2] < b[2];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[0] < b[0];
  });

  Stencil<double> st;
  st.name = def->name;
  st.dims = def->dims;
  st.order = def->order;
  st.fpp = def->fpp;

  const int t = static_cast<int>(offs.size()) - 1;  // off-center tap count
  const double denom = 2.0 * (static_cast<double>(t) * (t + 1) / 2.0);
  int j = 0;
  for (const auto& o : offs) {
    if (o == std::array<int, 3>{0, 0, 0}) continue;
    ++j;
    st.taps.push_back({o, t > 0 ? static_cast<double>(j) / denom : 0.0});
  }
  st.taps.push_back({{0, 0, 0}, 0.5 + (t == 0 ? 0.5 : 0.0)});
  validate_stencil(st);
  return st;
}

const std::vector<std::string>& benchmark_stencil_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& b : kBenchmarks) v.push_back(b.name);
    return v;
  }();
  return names;
}

bool is_3d_benchmark(std::string_view name) {
  for (const auto& b : kBenchmarks)
    if (name == b.name) return b.dims == 3;
  throw std::invalid_argument("unknown stencil benchmark: " + std::string(name));
}

}  // namespace ssam
