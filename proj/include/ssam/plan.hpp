#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ssam/warp.hpp"

namespace ssam {

// A stage is one application of the PE update rule: the incoming partial
// sum is shifted `shift` lanes up, then each lane folds in ctrl(r (x) x).
enum class OpKind { mul, add, mad, copy };

enum class XSource { cache, accumulator };

template <class T>
struct Stage {
  OpKind op = OpKind::mad;
  bool coeff_is_broadcast = false;  // true: r read from Plan::coefficients
  int coeff_index = 0;              // table index when broadcast
  T coeff_value{};                  // immediate r otherwise
  XSource x_source = XSource::cache;
  int x_register = 0;               // cache column supplying x
  int shift = 0;                    // lane delta applied to incoming partial sum
  std::vector<std::uint8_t> ctrl;   // per-lane mask; a false lane contributes 0
};

// How accumulators start: zero, or copied from a cache column (the scan
// mapping seeds each lane with its cached input).
struct InputBinding {
  int acc_init_register = -1;  // -1 means zero-init
  std::string description;     // free-form note on how grid data fills the cache
};

// Which lanes hold valid results after the last stage (inclusive range).
struct OutputBinding {
  int first_lane = 0;
  int last_lane = 0;
};

// The warp-level algorithm description: ordered stages (O and D), the
// broadcast coefficient table, and the input/output bindings (X, Y).
template <class T>
struct Plan {
  int lane_count = 32;
  int cache_width = 1;
  std::vector<Stage<T>> stages;
  std::vector<T> coefficients;
  InputBinding input;
  OutputBinding output;
};

struct Diagnostic {
  int stage = -1;  // -1: plan-level problem
  std::string message;
};

// Structural validation. Returns one diagnostic per violated invariant;
// empty means the plan is executable.
template <class T>
std::vector<Diagnostic> validate(const Plan<T>& plan) {
  std::vector<Diagnostic> out;
  auto plan_error = [&](std::string msg) { out.push_back({-1, std::move(msg)}); };

  if (plan.lane_count < 2 || plan.lane_count > 64 ||
      (plan.lane_count & (plan.lane_count - 1)) != 0)
    plan_error("lane_count must be a power of two in [2, 64]");
  if (plan.cache_width < 1) plan_error("cache_width must be >= 1");
  if (plan.stages.empty()) plan_error("plan has no stages");
  if (plan.input.acc_init_register >= plan.cache_width)
    plan_error("input binding references register beyond cache_width");
  if (plan.output.first_lane < 0 || plan.output.last_lane >= plan.lane_count ||
      plan.output.first_lane > plan.output.last_lane)
    plan_error("output binding is not a lane range inside the warp");

  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    const Stage<T>& st = plan.stages[s];
    auto stage_error = [&](std::string msg) { out.push_back({static_cast<int>(s), std::move(msg)}); };
    if (st.shift < 0 || st.shift >= plan.lane_count)
      stage_error("shift must be a lane delta inside the warp");
    if (st.x_source == XSource::cache &&
        (st.x_register < 0 || st.x_register >= plan.cache_width))
      stage_error("x register index outside the cache");
    if (st.coeff_is_broadcast &&
        (st.coeff_index < 0 ||
         static_cast<std::size_t>(st.coeff_index) >= plan.coefficients.size()))
      stage_error("broadcast coefficient index outside the table");
    if (st.ctrl.size() != static_cast<std::size_t>(plan.lane_count))
      stage_error("ctrl mask must have one entry per lane");
  }
  return out;
}

// Runs the plan on a loaded warp. Per stage the incoming accumulator is
// shifted by the stage's lane delta, then folded per the op kind. Returns
// the final per-lane accumulators; plan.output says which lanes are valid.
template <class T>
std::vector<T> execute(const Plan<T>& plan, WarpState<T>& warp) {
  if (!validate(plan).empty())
    throw std::invalid_argument("execute: plan failed validation");
  if (warp.lane_count() != plan.lane_count)
    throw std::invalid_argument("execute: warp lane_count does not match plan");
  if (warp.cache_width() < plan.cache_width)
    throw std::invalid_argument("execute: warp cache narrower than plan expects");

  const int lanes = plan.lane_count;
  std::vector<T> acc(lanes, T{});
  if (plan.input.acc_init_register >= 0) {
    auto col = warp.cache_column(plan.input.acc_init_register);
    acc.assign(col.begin(), col.end());
  }

  std::vector<T> x(lanes);
  for (const Stage<T>& st : plan.stages) {
    bool masked = std::find(st.ctrl.begin(), st.ctrl.end(), std::uint8_t{0}) != st.ctrl.end();
    if (st.op != OpKind::copy) {
      if (st.x_source == XSource::cache) {
        auto col = warp.cache_column(st.x_register);
        x.assign(col.begin(), col.end());
      } else {
        x = acc;  // read before the shift below
      }
      if (masked)
        for (int i = 0; i < lanes; ++i)
          if (!st.ctrl[i]) x[i] = T{};
    }

    if (st.shift > 0) warp.shuffle_up_inplace(acc, st.shift);

    // Only mul/mad consume the coefficient r; add and copy never touch it.
    auto read_coeff = [&] {
      return st.coeff_is_broadcast ? warp.broadcast_read(plan.coefficients, st.coeff_index)
                                   : st.coeff_value;
    };
    switch (st.op) {
      case OpKind::mad:
        warp.lane_mad_inplace(acc, x, read_coeff());
        break;
      case OpKind::mul:
        std::fill(acc.begin(), acc.end(), T{});
        warp.lane_mad_inplace(acc, x, read_coeff());
        break;
      case OpKind::add:
        warp.lane_mad_inplace(acc, x, T{1});
        break;
      case OpKind::copy:
        break;  // pure transfer; the shift above did the work
    }
  }

  std::copy(acc.begin(), acc.end(), warp.accumulators().begin());
  return acc;
}

// 1D convolution as a stage chain: M mad stages, one shuffle between
// consecutive stages, ctrl fixed to all-true. Lane i >= M-1 ends up with
// the window [i-M+1, i] folded against the filter (filter reversed across
// stages so the result is a true convolution). M = 1 degenerates to an
// identity plan.
template <class T>
Plan<T> make_conv1d_plan(std::span<const T> filter, int lane_count = 32) {
  const int m = static_cast<int>(filter.size());
  if (m < 1 || m > lane_count)
    throw std::invalid_argument("conv1d plan: filter length must be in [1, lane_count]");

  Plan<T> plan;
  plan.lane_count = lane_count;
  plan.cache_width = 1;
  plan.coefficients.assign(filter.begin(), filter.end());
  plan.input.description = "one signal element per lane in cache column 0";
  plan.output = {m - 1, lane_count - 1};
  for (int j = 0; j < m; ++j) {
    Stage<T> st;
    st.op = OpKind::mad;
    st.coeff_is_broadcast = true;
    st.coeff_index = m - 1 - j;
    st.x_register = 0;
    st.shift = j == 0 ? 0 : 1;
    st.ctrl.assign(lane_count, 1);
    plan.stages.push_back(std::move(st));
  }
  return plan;
}

// Kogge-Stone inclusive scan: log2(S) stages with shifts 1, 2, 4, ...;
// r == 1, x is the lane's own running total, and lanes below the shift
// distance contribute nothing (they keep their value via the shuffle's
// low-lane self-keep). Accumulators seed from cache column 0.
template <class T>
Plan<T> make_scan_plan(int lane_count = 32) {
  if (lane_count < 2 || lane_count > 64 || (lane_count & (lane_count - 1)) != 0)
    throw std::invalid_argument("scan plan: lane_count must be a power of two in [2, 64]");

  Plan<T> plan;
  plan.lane_count = lane_count;
  plan.cache_width = 1;
  plan.input.acc_init_register = 0;
  plan.input.description = "one element per lane in cache column 0; accumulator starts there";
  plan.output = {0, lane_count - 1};
  for (int d = 1; d < lane_count; d *= 2) {
    Stage<T> st;
    st.op = OpKind::mad;
    st.coeff_is_broadcast = false;
    st.coeff_value = T{1};
    st.x_source = XSource::accumulator;
    st.shift = d;
    st.ctrl.assign(lane_count, 1);
    for (int i = 0; i < d; ++i) st.ctrl[i] = 0;
    plan.stages.push_back(std::move(st));
  }
  return plan;
}

namespace detail {

inline std::string format_scalar(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
inline std::string format_scalar(float v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}
inline std::string format_scalar(long long v) { return std::to_string(v); }
inline std::string format_scalar(std::int64_t v) { return std::to_string(v); }

inline const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::mul: return "mul";
    case OpKind::add: return "add";
    case OpKind::mad: return "mad";
    case OpKind::copy: return "copy";
  }
  return "?";
}

}  // namespace detail

// Text form used by golden-file tests and the halo/plan dump tooling.
// One record per stage, fields named after the stage members.
template <class T>
std::string plan_to_text(const Plan<T>& plan) {
  std::ostringstream os;
  os << "plan lane_count=" << plan.lane_count << " cache_width=" << plan.cache_width << "\n";
  os << "input acc_init="
     << (plan.input.acc_init_register < 0
             ? std::string("zero")
             : "cache[" + std::to_string(plan.input.acc_init_register) + "]");
  if (!plan.input.description.empty()) os << " note=\"" << plan.input.description << "\"";
  os << "\n";
  os << "output lanes=[" << plan.output.first_lane << "," << plan.output.last_lane << "]\n";
  os << "coefficients";
  for (const T& c : plan.coefficients) os << " " << detail::format_scalar(c);
  os << "\n";
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    const Stage<T>& st = plan.stages[i];
    os << "stage " << i << ": op=" << detail::op_name(st.op);
    if (st.coeff_is_broadcast)
      os << " coeff=table[" << st.coeff_index << "]";
    else
      os << " coeff=" << detail::format_scalar(st.coeff_value);
    os << " x=" << (st.x_source == XSource::cache
                        ? "cache[" + std::to_string(st.x_register) + "]"
                        : std::string("acc"));
    os << " shift=" << st.shift << " ctrl=";
    for (std::uint8_t b : st.ctrl) os << (b ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

}  // namespace ssam
