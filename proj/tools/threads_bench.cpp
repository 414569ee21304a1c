// Wall-clock comparison of the block-parallel kernels against their serial
// execution (threads=1) and the naive reference loops. Results are checked
// for equality while timing, so this doubles as a stress run.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ssam/kernels.hpp"
#include "ssam/oracle.hpp"

using namespace ssam;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e99;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, seconds(t0, t1));
  }
  return best;
}

void report(const char* name, double serial, double parallel, double naive) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms (x%.2f)   naive %8.3f ms\n",
              name, serial * 1e3, parallel * 1e3, serial / parallel, naive * 1e3);
}

}  // namespace

int main(int argc, char** argv) {
  int size = argc > 1 ? std::atoi(argv[1]) : 1024;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;
#ifdef _OPENMP
  std::printf("openmp max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; parallel numbers equal serial\n");
#endif
  std::printf("domain %dx%d (2D), %dx%dx%d (3D), best of %d\n\n", size, size, size / 8,
              size / 8, size / 8, reps);

  KernelConfig serial;
  serial.threads = 1;
  KernelConfig parallel;
  parallel.threads = 0;

  {
    auto grid = random_grid2d<float>(size, size, 1);
    auto filter = random_filter<float>(5, 5, 2);
    Grid2D<float> a, b, c;
    double ts = time_best_of(reps, [&] { a = conv2d(grid, filter, serial); });
    double tp = time_best_of(reps, [&] { b = conv2d(grid, filter, parallel); });
    double tn = time_best_of(reps, [&] { c = oracle::conv2d_naive(grid, filter, Boundary::zero); });
    if (a.data != b.data) std::printf("conv2d: serial/parallel DIVERGED\n");
    report("conv2d 5x5 f32", ts, tp, tn);
  }
  {
    auto st = make_benchmark_stencil("2d9pt");
    auto grid = random_grid2d<double>(size, size, 3);
    Grid2D<double> a, b, c;
    double ts = time_best_of(reps, [&] { a = stencil2d(grid, st, serial, 4); });
    double tp = time_best_of(reps, [&] { b = stencil2d(grid, st, parallel, 4); });
    double tn = time_best_of(reps, [&] { c = oracle::stencil2d_naive(grid, st, 4); });
    if (a.data != b.data) std::printf("stencil2d: serial/parallel DIVERGED\n");
    report("stencil2d 2d9pt x4 f64", ts, tp, tn);
  }
  {
    const int s3 = std::max(32, size / 8);
    auto st = make_benchmark_stencil("3d7pt");
    auto grid = random_grid3d<double>(s3, s3, s3, 4);
    KernelConfig s1 = serial, pN = parallel;
    s1.p = pN.p = 2;
    Grid3D<double> a, b, c;
    double ts = time_best_of(reps, [&] { a = stencil3d(grid, st, s1, 2); });
    double tp = time_best_of(reps, [&] { b = stencil3d(grid, st, pN, 2); });
    double tn = time_best_of(reps, [&] { c = oracle::stencil3d_naive(grid, st, 2); });
    if (a.data != b.data) std::printf("stencil3d: serial/parallel DIVERGED\n");
    report("stencil3d 3d7pt x2 f64", ts, tp, tn);
  }
  return 0;
}
