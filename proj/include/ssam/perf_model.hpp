#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssam/plan.hpp"
#include "ssam/rational.hpp"
#include "ssam/warp.hpp"

namespace ssam {

// Per-instruction warp latencies in cycles. The P100/V100 values come from
// micro-benchmark measurements; user profiles can be loaded from a file.
struct LatencyProfile {
  std::string name;
  Rational t_shfl{1};
  Rational t_mad{1};
  Rational t_smem_read{1};
  Rational t_reg{1};
  Rational t_gmem_read{300};
  Rational t_gmem_write{300};

  void check() const;
};

// Measured P100 / V100 profiles. Register access defaults to 1 cycle and
// global reads to 300 (the middle of the 200..400 coalesced range); both
// are overridable per run.
const std::vector<LatencyProfile>& builtin_profiles();

// Lookup order: builtin name, then $SSAM_PROFILE_DIR/<name>.profile, then
// <name> as a path.
LatencyProfile resolve_profile(const std::string& name_or_path);
LatencyProfile load_profile_file(const std::string& path);
void write_profile_file(const std::string& path, const LatencyProfile& prof);

// Latency of one output element with image data cached in shared memory:
//   L_smem = M*N*(T_mad + 2*T_smem_read + 2*T_reg)
Rational latency_smem(int m, int n, const LatencyProfile& prof);

// Latency of one output element with the register cache:
//   L_reg = M*N*(T_mad + T_smem_read + 2*T_reg) + (M-1)*T_shfl
Rational latency_reg(int m, int n, const LatencyProfile& prof);

// Dif_smem_reg = L_smem - L_reg = M*N*T_smem_read - (M-1)*T_shfl
Rational dif_smem_reg(int m, int n, const LatencyProfile& prof);

// Average-difference lower bound including halo-load overhead:
//   T_smem_read - T_gmem_read*(N/(N+P-1) + M/32)
//     + P*M*N*T_smem_read/(N+P-1) - (M-1)*T_shfl
// Reported raw; it goes negative outside the large-P regime.
Rational avg_dif_lower_bound(int m, int n, int p, const LatencyProfile& prof);

// Same bound with a user-supplied shared-memory halo ratio instead of the
// ideal HR_smc = 0: the global-read halo term (N/C + M/32) becomes
// ((N/C + M/32) - HR_smc) / (1 + HR_smc). HR_smc must lie in [0, 1).
Rational avg_dif_lower_bound_smc(int m, int n, int p, const LatencyProfile& prof,
                                 const Rational& hr_smc);

// Predicted-vs-counted instruction totals for one warp's P-window
// convolution sweep, plus the model values for the configuration.
struct CostReport {
  int m = 0, n = 0, p = 0;
  std::string profile;
  Rational l_reg{0}, l_smem{0}, dif{0}, avg_dif{0}, hr_rc{0};
  OpCounters counted;
  OpCounters predicted;
  bool counts_match = false;
};

CostReport cross_check(const OpCounters& counted, int m, int n, int p,
                       const LatencyProfile& prof, int lane_count);

// Modeled cycle cost of a plan: every shifting stage pays T_shfl; mul/add/
// mad stages pay T_mad plus T_smem_read when the coefficient is a
// broadcast read, plus 2*T_reg for the x read and accumulator write; copy
// stages pay the register traffic only. A conv1d plan of M stages prices
// out to exactly latency_reg(M, 1).
template <class T>
Rational plan_cycles(const Plan<T>& plan, const LatencyProfile& prof) {
  Rational total{0};
  for (const auto& st : plan.stages) {
    if (st.shift > 0) total += prof.t_shfl;
    switch (st.op) {
      case OpKind::mad:
      case OpKind::mul:
      case OpKind::add:
        total += prof.t_mad + prof.t_reg + prof.t_reg;
        if (st.coeff_is_broadcast) total += prof.t_smem_read;
        break;
      case OpKind::copy:
        total += prof.t_reg + prof.t_reg;
        break;
    }
  }
  return total;
}

struct PlanRank {
  std::size_t index = 0;  // position in the input list
  Rational cycles{0};
  std::uint64_t shift_stages = 0;
};

// Ranks plans by modeled cycles; ties break toward fewer shuffles, then
// declaration order.
template <class T>
std::vector<PlanRank> compare_plans(const std::vector<Plan<T>>& plans,
                                    const LatencyProfile& prof) {
  std::vector<PlanRank> ranks;
  ranks.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (!validate(plans[i]).empty())
      throw std::invalid_argument("compare_plans: plan " + std::to_string(i) + " is invalid");
    PlanRank r;
    r.index = i;
    r.cycles = plan_cycles(plans[i], prof);
    for (const auto& st : plans[i].stages) r.shift_stages += st.shift > 0 ? 1 : 0;
    ranks.push_back(std::move(r));
  }
  std::stable_sort(ranks.begin(), ranks.end(), [](const PlanRank& a, const PlanRank& b) {
    if (a.cycles != b.cycles) return a.cycles < b.cycles;
    if (a.shift_stages != b.shift_stages) return a.shift_stages < b.shift_stages;
    return a.index < b.index;
  });
  return ranks;
}

}  // namespace ssam
