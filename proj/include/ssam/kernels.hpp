#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ssam/blocking.hpp"
#include "ssam/filter.hpp"
#include "ssam/grid.hpp"
#include "ssam/plan.hpp"
#include "ssam/warp.hpp"

namespace ssam {

namespace detail {

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

template <class T>
T boundary_sample(const Grid2D<T>& g, int x, int y, Boundary b) {
  if (x >= 0 && x < g.width && y >= 0 && y < g.height) return g.at(x, y);
  if (b == Boundary::zero) return T{};
  return g.at(clamp_index(x, g.width), clamp_index(y, g.height));
}

template <class T>
T boundary_sample(const std::vector<T>& v, int i, Boundary b) {
  const int n = static_cast<int>(v.size());
  if (i >= 0 && i < n) return v[i];
  if (b == Boundary::zero) return T{};
  return v[clamp_index(i, n)];
}

// Runs fn(tile_index, per_thread_counters) over [0, count), optionally in
// parallel. Tiles write disjoint output regions, so the only shared state
// is the counter total, reduced once per thread.
template <class Fn>
void for_each_tile(std::size_t count, int threads, OpCounters* total, Fn&& fn) {
#ifdef _OPENMP
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
  {
    OpCounters local;
#pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      fn(static_cast<std::size_t>(i), local);
    if (total) {
#pragma omp critical(ssam_counter_merge)
      *total += local;
    }
  }
#else
  (void)threads;
  OpCounters local;
  for (std::size_t i = 0; i < count; ++i) fn(i, local);
  if (total) *total += local;
#endif
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Window plans
// ---------------------------------------------------------------------------

// Plans for one warp's P-step sliding window over a dense m x n filter.
// Window t0 folds cache rows [t0, t0+n-1]; each filter column becomes n mad
// stages reading broadcast weights, with one lane shift between columns.
// Stage weights are the flipped filter so the result is a true convolution.
template <class T>
std::vector<Plan<T>> conv2d_window_plans(const Filter2D<T>& f, int p, int lane_count) {
  if (f.m > lane_count)
    throw std::invalid_argument("conv plans: filter wider than the warp");
  const int c = f.n + p - 1;
  std::vector<Plan<T>> plans;
  plans.reserve(p);
  for (int t0 = 0; t0 < p; ++t0) {
    Plan<T> plan;
    plan.lane_count = lane_count;
    plan.cache_width = c;
    plan.coefficients = f.w;
    plan.input.description = "one grid column per lane, C consecutive rows";
    plan.output = {f.m - 1, lane_count - 1};
    for (int j = 0; j < f.m; ++j)
      for (int t = 0; t < f.n; ++t) {
        Stage<T> st;
        st.op = OpKind::mad;
        st.coeff_is_broadcast = true;
        st.coeff_index = (f.m - 1 - j) * f.n + (f.n - 1 - t);
        st.x_register = t0 + t;
        st.shift = (t == 0 && j > 0) ? 1 : 0;
        st.ctrl.assign(lane_count, 1);
        plan.stages.push_back(std::move(st));
      }
    plans.push_back(std::move(plan));
  }
  return plans;
}

// Plans for a sparse 2D tap set executed over its (2k+1)-wide bounding
// box. Taps are grouped by bounding-box column; zero-coefficient cells
// simply have no stage (the ctrl'd-out case), and runs of empty columns
// fold into the next stage's shift. A trailing copy stage carries any
// leftover shift so the lane-to-output mapping matches the dense case.
// Coefficients ride as immediates, mirroring how stencil kernels take
// them as arguments rather than from shared memory.
template <class T>
std::vector<Plan<T>> stencil_window_plans(const std::vector<StencilTap<T>>& taps2d, int order,
                                          int p, int lane_count) {
  const int k = order;
  const int m = 2 * k + 1;
  if (m > lane_count) throw std::invalid_argument("stencil plans: order too high for the warp");
  const int c = m + p - 1;

  // Bucket taps by column, rows ascending.
  std::vector<std::vector<const StencilTap<T>*>> columns(m);
  for (const auto& tap : taps2d) columns[tap.offset[0] + k].push_back(&tap);
  for (auto& col : columns)
    std::sort(col.begin(), col.end(),
              [](const auto* a, const auto* b) { return a->offset[1] < b->offset[1]; });

  std::vector<Plan<T>> plans;
  plans.reserve(p);
  for (int t0 = 0; t0 < p; ++t0) {
    Plan<T> plan;
    plan.lane_count = lane_count;
    plan.cache_width = c;
    plan.input.description = "one grid column per lane, C consecutive rows";
    plan.output = {m - 1, lane_count - 1};
    int pending_shift = 0;
    for (int j = 0; j < m; ++j) {
      if (j > 0) pending_shift += 1;
      for (const auto* tap : columns[j]) {
        Stage<T> st;
        st.op = OpKind::mad;
        st.coeff_value = tap->coeff;
        st.x_register = t0 + k + tap->offset[1];
        st.shift = pending_shift;
        st.ctrl.assign(lane_count, 1);
        plan.stages.push_back(std::move(st));
        pending_shift = 0;
      }
    }
    if (pending_shift > 0) {
      Stage<T> st;
      st.op = OpKind::copy;
      st.shift = pending_shift;
      st.ctrl.assign(lane_count, 1);
      plan.stages.push_back(std::move(st));
    }
    if (plan.stages.empty()) throw std::invalid_argument("stencil plans: no taps");
    plans.push_back(std::move(plan));
  }
  return plans;
}

// One warp's full sliding-window pass: execute each window plan in order
// against an already-loaded cache. Returns one per-lane vector per window.
template <class T>
std::vector<std::vector<T>> run_warp_sweep(WarpState<T>& warp,
                                           const std::vector<Plan<T>>& window_plans) {
  std::vector<std::vector<T>> out;
  out.reserve(window_plans.size());
  for (const auto& plan : window_plans) out.push_back(execute(plan, warp));
  return out;
}

// ---------------------------------------------------------------------------
// 2D convolution
// ---------------------------------------------------------------------------

template <class T>
void stage_tile_cache(const Grid2D<T>& in, const WarpTile& tile, Boundary boundary,
                      WarpState<T>& warp, std::vector<T>& column) {
  const int s = warp.lane_count(), c = warp.cache_width();
  column.resize(s);
  for (int reg = 0; reg < c; ++reg) {
    const int y = tile.cache_y0 + reg;
    for (int lane = 0; lane < s; ++lane)
      column[lane] = detail::boundary_sample(in, tile.cache_x0 + lane, y, boundary);
    warp.load_column(reg, column);
  }
}

template <class T>
Grid2D<T> conv2d(const Grid2D<T>& in, const Filter2D<T>& f, const KernelConfig& cfg,
                 OpCounters* counters = nullptr) {
  if (f.m > 20 || f.n > 20)
    throw std::invalid_argument("conv2d: filter larger than the supported 20x20 range");
  cfg.check(f.n);
  const int s = cfg.lane_count;
  const int c = f.n + cfg.p - 1;
  if (in.width < s) throw std::invalid_argument("conv2d: grid narrower than one warp");
  if (in.height < c) throw std::invalid_argument("conv2d: grid shorter than one cache block");

  const BlockPlan bp = plan_blocks(in.width, in.height, f, cfg, s);
  const auto plans = conv2d_window_plans(f, cfg.p, s);

  Grid2D<T> out(in.width, in.height);
  detail::for_each_tile(bp.tiles.size(), cfg.threads, counters, [&](std::size_t i, OpCounters& local) {
    const WarpTile& tile = bp.tiles[i];
    WarpState<T> warp(s, c);
    std::vector<T> column;
    stage_tile_cache(in, tile, cfg.boundary, warp, column);
    // Every warp executes all P windows; stores outside the valid region
    // are masked so the instruction stream is identical across warps.
    for (int t0 = 0; t0 < cfg.p; ++t0) {
      const std::vector<T> acc = execute(plans[t0], warp);
      if (t0 >= tile.out_h) continue;
      const int oy = tile.out_y0 + t0;
      for (int lane = f.m - 1; lane < s; ++lane) {
        const int dx = lane - (f.m - 1);
        if (dx >= tile.out_w) break;
        out.at(tile.out_x0 + dx, oy) = acc[lane];
        warp.count_global_stores(1);
      }
    }
    local += warp.counters();
  });
  return out;
}

// ---------------------------------------------------------------------------
// 2D stencil (Jacobi sweeps)
// ---------------------------------------------------------------------------

template <class T>
Grid2D<T> stencil2d(const Grid2D<T>& in, const Stencil<T>& st, const KernelConfig& cfg,
                    int iters, OpCounters* counters = nullptr) {
  validate_stencil(st);
  if (st.dims != 2) throw std::invalid_argument("stencil2d: needs a 2D stencil");
  if (iters < 1) throw std::invalid_argument("stencil2d: iters must be >= 1");
  const int k = st.order;
  const int m = 2 * k + 1;
  if (in.width < m || in.height < m)
    throw std::invalid_argument("stencil2d: domain smaller than the stencil diameter");
  cfg.check(m);

  const int s = cfg.lane_count;
  const int c = m + cfg.p - 1;
  const BlockPlan bp = plan_blocks(in.width, in.height, m, m, cfg, s);
  const auto plans = stencil_window_plans(st.taps, k, cfg.p, s);

  Grid2D<T> cur = in;
  Grid2D<T> next = in;
  for (int it = 0; it < iters; ++it) {
    next = cur;  // boundary ring carries over; interior rewritten below
    detail::for_each_tile(bp.tiles.size(), cfg.threads, counters,
                          [&](std::size_t i, OpCounters& local) {
      const WarpTile& tile = bp.tiles[i];
      WarpState<T> warp(s, c);
      std::vector<T> column;
      stage_tile_cache(cur, tile, Boundary::zero, warp, column);
      for (int t0 = 0; t0 < cfg.p; ++t0) {
        const std::vector<T> acc = execute(plans[t0], warp);
        if (t0 >= tile.out_h) continue;
        const int oy = tile.out_y0 + t0;
        if (oy < k || oy >= in.height - k) continue;  // ring row: copy only
        for (int lane = m - 1; lane < s; ++lane) {
          const int dx = lane - (m - 1);
          if (dx >= tile.out_w) break;
          const int ox = tile.out_x0 + dx;
          if (ox < k || ox >= in.width - k) continue;
          next.at(ox, oy) = acc[lane];
          warp.count_global_stores(1);
        }
      }
      local += warp.counters();
    });
    std::swap(cur, next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// 3D stencil
// ---------------------------------------------------------------------------

template <class T>
Grid3D<T> stencil3d(const Grid3D<T>& in, const Stencil<T>& st, const KernelConfig& cfg,
                    int iters, OpCounters* counters = nullptr) {
  validate_stencil(st);
  if (st.dims != 3) throw std::invalid_argument("stencil3d: needs a 3D stencil");
  if (iters < 1) throw std::invalid_argument("stencil3d: iters must be >= 1");
  const int k = st.order;
  const int m = 2 * k + 1;
  if (in.nx < m || in.ny < m || in.nz < m)
    throw std::invalid_argument("stencil3d: domain smaller than the stencil diameter");
  cfg.check(m);

  const int s = cfg.lane_count;
  const int c = m + cfg.p - 1;
  const int warp_count = cfg.warp_count();
  if (warp_count < m)
    throw std::invalid_argument("stencil3d: block must hold at least 2k+1 warps; raise b");
  const int valid_z = warp_count - 2 * k;

  // Per-plane window plans, indexed by dz + k. A warp holding plane z
  // contributes its dz-plane partial sums to output slice z - dz.
  std::vector<std::vector<Plan<T>>> plane_plans(2 * k + 1);
  for (int dz = -k; dz <= k; ++dz) {
    std::vector<StencilTap<T>> taps2d;
    for (const auto& tap : st.taps)
      if (tap.offset[2] == dz)
        taps2d.push_back({{tap.offset[0], tap.offset[1], 0}, tap.coeff});
    if (!taps2d.empty())
      plane_plans[dz + k] = stencil_window_plans(taps2d, k, cfg.p, s);
  }

  const int valid_w = s - m + 1;
  const int gx = (in.nx + valid_w - 1) / valid_w;
  const int gy = (in.ny + cfg.p - 1) / cfg.p;
  const int gz = (in.nz + valid_z - 1) / valid_z;
  const std::size_t block_count = static_cast<std::size_t>(gx) * gy * gz;

  Grid3D<T> cur = in;
  Grid3D<T> next = in;
  for (int it = 0; it < iters; ++it) {
    next = cur;
    detail::for_each_tile(block_count, cfg.threads, counters,
                          [&](std::size_t bi, OpCounters& local) {
      const int bx = static_cast<int>(bi % gx);
      const int by = static_cast<int>((bi / gx) % gy);
      const int bz = static_cast<int>(bi / (static_cast<std::size_t>(gx) * gy));
      const int out_x0 = bx * valid_w;
      const int out_y0 = by * cfg.p;
      const int z0 = bz * valid_z;
      const int cache_x0 = out_x0 - k;
      const int cache_y0 = out_y0 - k;

      InterWarpBuffer<T> buffer(valid_z, cfg.p, s);
      std::vector<T> column(s);
      for (int w = 0; w < warp_count; ++w) {
        const int zw = z0 - k + w;
        WarpState<T> warp(s, c);
        for (int reg = 0; reg < c; ++reg) {
          const int y = cache_y0 + reg;
          for (int lane = 0; lane < s; ++lane) {
            const int x = cache_x0 + lane;
            const bool inside = x >= 0 && x < in.nx && y >= 0 && y < in.ny &&
                                zw >= 0 && zw < in.nz;
            column[lane] = inside ? cur.at(x, y, zw) : T{};
          }
          warp.load_column(reg, column);
        }
        for (int dz = -k; dz <= k; ++dz) {
          const auto& plans = plane_plans[dz + k];
          if (plans.empty()) continue;
          const int slice = w - k - dz;  // block-local target slice
          for (int t0 = 0; t0 < cfg.p; ++t0) {
            const std::vector<T> acc = execute(plans[t0], warp);
            if (slice < 0 || slice >= valid_z) continue;
            for (int lane = m - 1; lane < s; ++lane)
              buffer.at(slice, t0, lane) += acc[lane];
          }
        }
        local += warp.counters();
      }

      // All warps have contributed: write the block's valid slices.
      for (int slice = 0; slice < valid_z; ++slice) {
        const int z = z0 + slice;
        if (z < k || z >= in.nz - k) continue;
        for (int t0 = 0; t0 < cfg.p; ++t0) {
          const int oy = out_y0 + t0;
          if (oy < k || oy >= in.ny - k) continue;
          for (int lane = m - 1; lane < s; ++lane) {
            const int ox = out_x0 + lane - (m - 1);
            if (ox >= in.nx) break;
            if (ox < k || ox >= in.nx - k) continue;
            next.at(ox, oy, z) = buffer.at(slice, t0, lane);
            local.global_stores += 1;
          }
        }
      }
    });
    std::swap(cur, next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// 1D convolution and scan
// ---------------------------------------------------------------------------

template <class T>
std::vector<T> conv1d(const std::vector<T>& signal, const std::vector<T>& filter,
                      const KernelConfig& cfg, OpCounters* counters = nullptr) {
  const int m = static_cast<int>(filter.size());
  const int s = cfg.lane_count;
  if (m < 1 || m > s)
    throw std::invalid_argument("conv1d: filter length must be in [1, lane_count]");
  if (static_cast<int>(signal.size()) < s)
    throw std::invalid_argument("conv1d: signal shorter than one warp");

  const Plan<T> plan = make_conv1d_plan<T>(filter, s);
  const int len = static_cast<int>(signal.size());
  const int valid_w = s - m + 1;
  const int left = m / 2;  // ceil((m-1)/2)
  std::vector<T> out(signal.size());
  std::vector<T> window(s);
  OpCounters total;
  for (int out0 = 0; out0 < len; out0 += valid_w) {
    WarpState<T> warp(s, 1);
    for (int lane = 0; lane < s; ++lane)
      window[lane] = detail::boundary_sample(signal, out0 - left + lane, cfg.boundary);
    warp.load_rows(window);
    const std::vector<T> acc = execute(plan, warp);
    for (int lane = m - 1; lane < s; ++lane) {
      const int pos = out0 + lane - (m - 1);
      if (pos >= len) break;
      out[pos] = acc[lane];
      warp.count_global_stores(1);
    }
    total += warp.counters();
  }
  if (counters) *counters += total;
  return out;
}

// Tiled Kogge-Stone scan: each lane_count-sized tile runs the warp plan;
// the previous tile's last element carries over as a host-side addition.
template <class T>
std::vector<T> scan(const std::vector<T>& values, int lane_count = 32,
                    OpCounters* counters = nullptr) {
  const int s = lane_count;
  if (values.size() % static_cast<std::size_t>(s) != 0)
    throw std::invalid_argument("scan: length must be a multiple of lane_count");
  if (values.empty()) return {};

  const Plan<T> plan = make_scan_plan<T>(s);
  std::vector<T> out(values.size());
  OpCounters total;
  T carry{};
  for (std::size_t tile = 0; tile < values.size() / s; ++tile) {
    WarpState<T> warp(s, 1);
    warp.load_rows(std::span<const T>(values.data() + tile * s, s));
    const std::vector<T> acc = execute(plan, warp);
    for (int lane = 0; lane < s; ++lane) {
      out[tile * s + lane] = acc[lane] + carry;
      warp.count_global_stores(1);
    }
    carry = out[tile * s + s - 1];
    total += warp.counters();
  }
  if (counters) *counters += total;
  return out;
}

}  // namespace ssam
