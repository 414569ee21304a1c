#include "ssam/blocking.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ssam {

BlockPlan plan_blocks(int w, int h, int m, int n, const KernelConfig& cfg, int lane_count) {
  if (m < 1 || n < 1) throw std::invalid_argument("plan_blocks: filter taps must be >= 1");
  if (m > lane_count) throw std::invalid_argument("plan_blocks: m exceeds lane_count");
  if (w < 1 || h < 1) throw std::invalid_argument("plan_blocks: empty domain");
  cfg.check(n);
  if (cfg.lane_count != lane_count)
    throw std::invalid_argument("plan_blocks: lane_count disagrees with config");

  BlockPlan plan;
  plan.lane_count = lane_count;
  plan.warp_count = cfg.warp_count();
  plan.m = m;
  plan.n = n;
  plan.p = cfg.p;
  plan.c = n + cfg.p - 1;
  plan.domain_w = w;
  plan.domain_h = h;

  const int valid_w = lane_count - m + 1;                 // outputs per warp per row
  const int block_span = plan.warp_count * valid_w;       // outputs per block per row
  plan.grid_dim_x = (w + block_span - 1) / block_span;
  plan.grid_dim_y = (h + cfg.p - 1) / cfg.p;

  // The cached window for output column x covers [x - ceil((m-1)/2),
  // x + floor((m-1)/2)]; same split vertically with n.
  const int left = m / 2;         // = ceil((m-1)/2)
  const int top = n / 2;          // = ceil((n-1)/2)
  plan.halo = {left, m - 1 - left, top, n - 1 - top};

  for (int by = 0; by < plan.grid_dim_y; ++by) {
    const int out_y0 = by * cfg.p;
    const int out_h = std::min(cfg.p, h - out_y0);
    for (int bx = 0; bx < plan.grid_dim_x; ++bx) {
      for (int wrp = 0; wrp < plan.warp_count; ++wrp) {
        const int out_x0 = (bx * plan.warp_count + wrp) * valid_w;
        const int out_w = std::min(valid_w, w - out_x0);
        if (out_w <= 0 || out_h <= 0) continue;  // idle warp past the domain edge
        WarpTile t;
        t.block_x = bx;
        t.block_y = by;
        t.warp = wrp;
        t.out_x0 = out_x0;
        t.out_y0 = out_y0;
        t.out_w = out_w;
        t.out_h = out_h;
        t.cache_x0 = out_x0 - left;
        t.cache_y0 = out_y0 - top;
        plan.tiles.push_back(t);
      }
    }
  }
  return plan;
}

Rational halo_ratio(int lane_count, int c, int m, int n) {
  if (m < 1 || m > lane_count) throw std::invalid_argument("halo_ratio: need 1 <= m <= S");
  if (n < 1 || n > c) throw std::invalid_argument("halo_ratio: need 1 <= n <= C");
  const long long s = lane_count;
  return Rational(s * c - (s - m) * (c - n), s * c);
}

RedundancyReport measure_redundancy_report(const BlockPlan& plan) {
  RedundancyReport rep;
  rep.total_tiles = plan.tiles.size();

  const int s = plan.lane_count, c = plan.c, m = plan.m, n = plan.n;

  // Tally per-cell load counts over the padded footprint of all tiles.
  int min_x = 0, min_y = 0, max_x = plan.domain_w, max_y = plan.domain_h;
  for (const auto& t : plan.tiles) {
    min_x = std::min(min_x, t.cache_x0);
    min_y = std::min(min_y, t.cache_y0);
    max_x = std::max(max_x, t.cache_x0 + s);
    max_y = std::max(max_y, t.cache_y0 + c);
  }
  const long long fw = max_x - min_x, fh = max_y - min_y;
  std::vector<std::uint32_t> loads(static_cast<std::size_t>(fw) * fh, 0);

  long long redundant_interior = 0, loads_interior = 0;
  for (const auto& t : plan.tiles) {
    const bool interior = t.cache_x0 >= 0 && t.cache_y0 >= 0 &&
                          t.cache_x0 + s <= plan.domain_w &&
                          t.cache_y0 + c <= plan.domain_h &&
                          t.out_w == plan.lane_count - m + 1 && t.out_h == plan.p;
    if (interior) rep.interior_tiles += 1;
    for (int reg = 0; reg < c; ++reg)
      for (int lane = 0; lane < s; ++lane) {
        const long long x = t.cache_x0 + lane - min_x;
        const long long y = t.cache_y0 + reg - min_y;
        loads[static_cast<std::size_t>(y) * fw + x] += 1;
        if (interior) {
          loads_interior += 1;
          // Cells outside the trailing (S-m) x (C-n) core are halo.
          if (lane < m || reg < n) redundant_interior += 1;
        }
      }
  }

  rep.total_loads = static_cast<std::uint64_t>(plan.tiles.size()) *
                    static_cast<std::uint64_t>(s) * c;
  for (std::uint32_t v : loads) rep.distinct_cells += v > 0 ? 1 : 0;
  if (rep.total_loads > 0)
    rep.first_touch_fraction =
        Rational(static_cast<long long>(rep.total_loads - rep.distinct_cells),
                 static_cast<long long>(rep.total_loads));
  if (loads_interior > 0)
    rep.interior_fraction = Rational(redundant_interior, loads_interior);
  else if (rep.total_loads > 0)
    rep.interior_fraction = rep.first_touch_fraction;  // tiny domains: best effort
  return rep;
}

Rational measure_redundancy(const BlockPlan& plan) {
  return measure_redundancy_report(plan).interior_fraction;
}

std::string block_plan_to_text(const BlockPlan& plan) {
  std::ostringstream os;
  os << "block_plan domain=" << plan.domain_w << "x" << plan.domain_h
     << " grid_dim=" << plan.grid_dim_x << "x" << plan.grid_dim_y
     << " warp_count=" << plan.warp_count << " lane_count=" << plan.lane_count
     << " c=" << plan.c << " m=" << plan.m << " n=" << plan.n << " p=" << plan.p
     << " halo=l" << plan.halo.left << ",r" << plan.halo.right << ",t" << plan.halo.top
     << ",b" << plan.halo.bottom << "\n";
  for (const auto& t : plan.tiles)
    os << "tile block=(" << t.block_x << "," << t.block_y << ") warp=" << t.warp
       << " cache_origin=(" << t.cache_x0 << "," << t.cache_y0 << ") cache="
       << plan.lane_count << "x" << plan.c << " out_origin=(" << t.out_x0 << ","
       << t.out_y0 << ") out=" << t.out_w << "x" << t.out_h << "\n";
  return os.str();
}

CoverageResult check_coverage(const BlockPlan& plan) {
  std::vector<std::uint8_t> hits(
      static_cast<std::size_t>(plan.domain_w) * plan.domain_h, 0);
  CoverageResult res;
  for (const auto& t : plan.tiles)
    for (int dy = 0; dy < t.out_h; ++dy)
      for (int dx = 0; dx < t.out_w; ++dx) {
        auto& h = hits[static_cast<std::size_t>(t.out_y0 + dy) * plan.domain_w +
                       (t.out_x0 + dx)];
        if (h == 1) res.duplicated += 1;
        if (h < 2) h += 1;
      }
  for (std::uint8_t h : hits) res.missing += h == 0 ? 1 : 0;
  res.exact = res.missing == 0 && res.duplicated == 0;
  return res;
}

}  // namespace ssam
