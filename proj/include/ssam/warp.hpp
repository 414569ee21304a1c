#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ssam {

// Tally of warp-wide instructions executed. One shuffle/mad/broadcast entry
// is one instruction for the whole warp; loads and stores count elements.
struct OpCounters {
  std::uint64_t mads = 0;
  std::uint64_t shuffles = 0;
  std::uint64_t broadcast_reads = 0;
  std::uint64_t global_loads = 0;
  std::uint64_t global_stores = 0;

  OpCounters& operator+=(const OpCounters& o) {
    mads += o.mads;
    shuffles += o.shuffles;
    broadcast_reads += o.broadcast_reads;
    global_loads += o.global_loads;
    global_stores += o.global_stores;
    return *this;
  }
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

// One warp: lane_count lock-stepped lanes, each with a private register
// cache of C scalars and one accumulator. Deterministic sequential state
// machine; independent instances may run on different threads.
template <class T>
class WarpState {
public:
  WarpState(int lane_count, int cache_width)
      : lanes_(lane_count), cache_width_(cache_width) {
    if (lane_count < 2 || lane_count > 64 || (lane_count & (lane_count - 1)) != 0)
      throw std::invalid_argument("warp: lane_count must be a power of two in [2, 64]");
    if (cache_width < 1)
      throw std::invalid_argument("warp: cache width must be >= 1");
    cache_.assign(static_cast<std::size_t>(lanes_) * cache_width_, T{});
    acc_.assign(lanes_, T{});
  }

  int lane_count() const { return lanes_; }
  int cache_width() const { return cache_width_; }
  const OpCounters& counters() const { return counters_; }

  // Register-major cache storage: column c of all lanes is contiguous.
  T cache_at(int lane, int reg) const { return cache_[static_cast<std::size_t>(reg) * lanes_ + lane]; }
  std::span<const T> cache_column(int reg) const {
    return {cache_.data() + static_cast<std::size_t>(reg) * lanes_, static_cast<std::size_t>(lanes_)};
  }

  std::span<const T> accumulators() const { return acc_; }
  std::span<T> accumulators() { return acc_; }

  // shfl_up semantics: result[i] = values[i - delta] for i >= delta, and
  // lanes below delta keep their own value. One warp-wide instruction.
  std::vector<T> shuffle_up(std::span<const T> values, int delta) {
    check_lanes(values.size());
    if (delta < 0 || delta >= lanes_)
      throw std::invalid_argument("shuffle_up: delta must be in [0, lane_count)");
    std::vector<T> out(values.begin(), values.end());
    shuffle_up_inplace(out, delta);
    return out;
  }

  // In-place variant used by the plan executor; same instruction count.
  void shuffle_up_inplace(std::vector<T>& values, int delta) {
    check_lanes(values.size());
    if (delta < 0 || delta >= lanes_)
      throw std::invalid_argument("shuffle_up: delta must be in [0, lane_count)");
    for (int i = lanes_ - 1; i >= delta; --i) values[i] = values[i - delta];
    counters_.shuffles += 1;
  }

  // All lanes read the same table entry; models one shared-memory
  // broadcast per warp.
  T broadcast_read(std::span<const T> table, int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= table.size())
      throw std::invalid_argument("broadcast_read: index out of bounds");
    counters_.broadcast_reads += 1;
    return table[index];
  }

  // result[i] = acc[i] + a[i] * b[i]; one warp-wide MAD.
  std::vector<T> lane_mad(std::span<const T> acc, std::span<const T> a, std::span<const T> b) {
    check_lanes(acc.size());
    check_lanes(a.size());
    check_lanes(b.size());
    std::vector<T> out(acc.begin(), acc.end());
    for (int i = 0; i < lanes_; ++i) out[i] += a[i] * b[i];
    counters_.mads += 1;
    return out;
  }

  // acc[i] += x[i] * r for every lane; one warp-wide MAD.
  void lane_mad_inplace(std::vector<T>& acc, std::span<const T> x, T r) {
    check_lanes(acc.size());
    check_lanes(x.size());
    for (int i = 0; i < lanes_; ++i) acc[i] += x[i] * r;
    counters_.mads += 1;
  }

  // Fills the cache from a lane_count x C block (lane-major), column by
  // column: C coalesced row loads, lane_count * C elements from global.
  void load_rows(std::span<const T> block_lane_major) {
    if (block_lane_major.size() != cache_.size())
      throw std::invalid_argument("load_rows: block must be lane_count x cache_width");
    for (int reg = 0; reg < cache_width_; ++reg)
      for (int lane = 0; lane < lanes_; ++lane)
        cache_[static_cast<std::size_t>(reg) * lanes_ + lane] =
            block_lane_major[static_cast<std::size_t>(lane) * cache_width_ + reg];
    counters_.global_loads += static_cast<std::uint64_t>(lanes_) * cache_width_;
  }

  // Direct column store used by tile staging; counts like load_rows does
  // per column.
  void load_column(int reg, std::span<const T> values) {
    check_lanes(values.size());
    if (reg < 0 || reg >= cache_width_) throw std::invalid_argument("load_column: bad register");
    for (int lane = 0; lane < lanes_; ++lane)
      cache_[static_cast<std::size_t>(reg) * lanes_ + lane] = values[lane];
    counters_.global_loads += static_cast<std::uint64_t>(lanes_);
  }

  void count_global_stores(std::uint64_t n) { counters_.global_stores += n; }

private:
  void check_lanes(std::size_t n) const {
    if (n != static_cast<std::size_t>(lanes_))
      throw std::invalid_argument("warp: per-lane vector has wrong length");
  }

  int lanes_;
  int cache_width_;
  std::vector<T> cache_;
  std::vector<T> acc_;
  OpCounters counters_;
};

}  // namespace ssam
