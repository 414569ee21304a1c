#pragma once

#include <vector>

#include "ssam/filter.hpp"
#include "ssam/rational.hpp"

namespace ssam {

// One warp's tile of an overlapped-block decomposition. The cached extent
// is always the full lane_count x C rectangle (it may reach outside the
// domain; those cells are boundary-filled). The valid-output region is
// clamped to the domain.
struct WarpTile {
  int block_x = 0, block_y = 0, warp = 0;
  int cache_x0 = 0, cache_y0 = 0;  // cached extent origin (may be negative)
  int out_x0 = 0, out_y0 = 0;      // valid-output origin
  int out_w = 0, out_h = 0;        // clamped valid size (<= S - m + 1, <= p)
};

struct HaloExtents {
  int left = 0, right = 0, top = 0, bottom = 0;
};

struct BlockPlan {
  int grid_dim_x = 0, grid_dim_y = 0;
  int warp_count = 0;
  int lane_count = 32;
  int c = 1;  // cached registers per lane
  int m = 1, n = 1, p = 1;
  int domain_w = 0, domain_h = 0;
  HaloExtents halo;             // per full interior tile, relative to its outputs
  std::vector<WarpTile> tiles;  // only warps with a non-empty valid region
};

// Overlapped-block decomposition of a W x H output domain:
//   grid_dim_x = ceil(W / (warp_count * (S - m + 1)))
//   grid_dim_y = ceil(H / p)
// Each warp caches S x C cells and owns an (S - m + 1) x p output tile.
BlockPlan plan_blocks(int w, int h, int m, int n, const KernelConfig& cfg, int lane_count);

template <class T>
BlockPlan plan_blocks(int w, int h, const Filter2D<T>& filter, const KernelConfig& cfg,
                      int lane_count) {
  return plan_blocks(w, h, filter.m, filter.n, cfg, lane_count);
}

// HR_rc = (S*C - (S-m)*(C-n)) / (S*C): the fraction of each warp's cached
// tile that is halo under the register-cache accounting, which treats the
// leading m-column / n-row L-band of the tile as redundant.
Rational halo_ratio(int lane_count, int c, int m, int n);

struct RedundancyReport {
  Rational interior_fraction{0};    // redundant loads / loads over full interior tiles
  Rational first_touch_fraction{0}; // 1 - distinct cells / total loads, whole plan
  std::uint64_t interior_tiles = 0;
  std::uint64_t total_tiles = 0;
  std::uint64_t total_loads = 0;
  std::uint64_t distinct_cells = 0;
};

// Tallies the simulated loads of every tile. The redundant-load fraction
// uses the same accounting as HR_rc (loads outside each tile's trailing
// (S-m) x (C-n) core are redundant), measured over tiles that are full
// sized and fully inside the domain; edge tiles are clipped out of that
// figure. The overlap-based first-touch fraction is reported alongside.
RedundancyReport measure_redundancy_report(const BlockPlan& plan);
Rational measure_redundancy(const BlockPlan& plan);

struct CoverageResult {
  bool exact = false;            // every output cell written exactly once
  std::uint64_t missing = 0;
  std::uint64_t duplicated = 0;
};

// Ownership map over the valid-output regions of every tile.
CoverageResult check_coverage(const BlockPlan& plan);

// Structured text dump: one header line, then one record per warp tile.
std::string block_plan_to_text(const BlockPlan& plan);

// Block-local accumulation buffer shared by the warps of one 3D-stencil
// block: slot (slice, window, lane) collects the partial sums each plane
// contributes to that output slice. Warps only read it after every warp
// has written, mirroring the single block-wide barrier.
template <class T>
struct InterWarpBuffer {
  int slices = 0, windows = 0, lanes = 0;
  std::vector<T> data;

  InterWarpBuffer(int s, int w, int l) : slices(s), windows(w), lanes(l) {
    data.assign(static_cast<std::size_t>(s) * w * l, T{});
  }
  T& at(int slice, int window, int lane) {
    return data[(static_cast<std::size_t>(slice) * windows + window) * lanes + lane];
  }
};

}  // namespace ssam
