#include "ssam/perf_model.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ssam/blocking.hpp"

namespace ssam {

void LatencyProfile::check() const {
  const Rational zero{0};
  for (const Rational* r : {&t_shfl, &t_mad, &t_smem_read, &t_reg, &t_gmem_read, &t_gmem_write})
    if (!(*r > zero))
      throw std::invalid_argument("profile " + name + ": latencies must be positive");
  if (t_gmem_read < t_smem_read)
    throw std::invalid_argument("profile " + name + ": global read cannot beat shared read");
}

const std::vector<LatencyProfile>& builtin_profiles() {
  static const std::vector<LatencyProfile> profiles = [] {
    LatencyProfile p100;
    p100.name = "P100";
    p100.t_shfl = 33;
    p100.t_mad = 6;
    p100.t_smem_read = 33;

    LatencyProfile v100;
    v100.name = "V100";
    v100.t_shfl = 22;
    v100.t_mad = 4;
    v100.t_smem_read = 27;

    return std::vector<LatencyProfile>{p100, v100};
  }();
  return profiles;
}

LatencyProfile load_profile_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open profile file: " + path);
  LatencyProfile prof;
  prof.name = path;
  std::map<std::string, Rational*> fields = {
      {"t_shfl", &prof.t_shfl},           {"t_mad", &prof.t_mad},
      {"t_smem_read", &prof.t_smem_read}, {"t_reg", &prof.t_reg},
      {"t_gmem_read", &prof.t_gmem_read}, {"t_gmem_write", &prof.t_gmem_write}};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;  // blank or comment-only line
    if (key == "name") {
      ls >> prof.name;
      continue;
    }
    if (!(ls >> value))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing value");
    auto it = fields.find(key);
    if (it == fields.end())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown field " + key);
    auto r = Rational::parse(value);
    if (!r)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad rational " + value);
    *it->second = *r;
  }
  prof.check();
  return prof;
}

void write_profile_file(const std::string& path, const LatencyProfile& prof) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open profile file for writing: " + path);
  os << "name " << prof.name << "\n";
  os << "t_shfl " << prof.t_shfl << "\n";
  os << "t_mad " << prof.t_mad << "\n";
  os << "t_smem_read " << prof.t_smem_read << "\n";
  os << "t_reg " << prof.t_reg << "\n";
  os << "t_gmem_read " << prof.t_gmem_read << "\n";
  os << "t_gmem_write " << prof.t_gmem_write << "\n";
}

LatencyProfile resolve_profile(const std::string& name_or_path) {
  for (const auto& p : builtin_profiles())
    if (p.name == name_or_path) return p;
  if (const char* dir = std::getenv("SSAM_PROFILE_DIR")) {
    const std::string candidate = std::string(dir) + "/" + name_or_path + ".profile";
    if (std::ifstream(candidate).good()) return load_profile_file(candidate);
  }
  return load_profile_file(name_or_path);
}

Rational latency_smem(int m, int n, const LatencyProfile& prof) {
  if (m < 1 || n < 1) throw std::invalid_argument("latency: m, n must be >= 1");
  return Rational(static_cast<long long>(m) * n) *
         (prof.t_mad + Rational(2) * prof.t_smem_read + Rational(2) * prof.t_reg);
}

Rational latency_reg(int m, int n, const LatencyProfile& prof) {
  if (m < 1 || n < 1) throw std::invalid_argument("latency: m, n must be >= 1");
  return Rational(static_cast<long long>(m) * n) *
             (prof.t_mad + prof.t_smem_read + Rational(2) * prof.t_reg) +
         Rational(m - 1) * prof.t_shfl;
}

Rational dif_smem_reg(int m, int n, const LatencyProfile& prof) {
  if (m < 1 || n < 1) throw std::invalid_argument("latency: m, n must be >= 1");
  return Rational(static_cast<long long>(m) * n) * prof.t_smem_read -
         Rational(m - 1) * prof.t_shfl;
}

Rational avg_dif_lower_bound(int m, int n, int p, const LatencyProfile& prof) {
  if (m < 1 || n < 1 || p < 1) throw std::invalid_argument("avg_dif: m, n, p must be >= 1");
  const Rational np(n + p - 1);
  return prof.t_smem_read -
         prof.t_gmem_read * (Rational(n) / np + Rational(m, 32)) +
         Rational(static_cast<long long>(p) * m * n) * prof.t_smem_read / np -
         Rational(m - 1) * prof.t_shfl;
}

Rational avg_dif_lower_bound_smc(int m, int n, int p, const LatencyProfile& prof,
                                 const Rational& hr_smc) {
  if (m < 1 || n < 1 || p < 1) throw std::invalid_argument("avg_dif: m, n, p must be >= 1");
  if (hr_smc < Rational(0) || !(hr_smc < Rational(1)))
    throw std::invalid_argument("avg_dif: HR_smc must be in [0, 1)");
  const Rational np(n + p - 1);
  const Rational halo = (Rational(n) / np + Rational(m, 32) - hr_smc) / (Rational(1) + hr_smc);
  return prof.t_smem_read - prof.t_gmem_read * halo +
         Rational(static_cast<long long>(p) * m * n) * prof.t_smem_read / np -
         Rational(m - 1) * prof.t_shfl;
}

CostReport cross_check(const OpCounters& counted, int m, int n, int p,
                       const LatencyProfile& prof, int lane_count) {
  CostReport rep;
  rep.m = m;
  rep.n = n;
  rep.p = p;
  rep.profile = prof.name;
  rep.l_reg = latency_reg(m, n, prof);
  rep.l_smem = latency_smem(m, n, prof);
  rep.dif = dif_smem_reg(m, n, prof);
  rep.avg_dif = avg_dif_lower_bound(m, n, p, prof);
  const int c = n + p - 1;
  rep.hr_rc = halo_ratio(lane_count, c, m, n);

  rep.predicted.mads = static_cast<std::uint64_t>(m) * n * p;
  rep.predicted.shuffles = static_cast<std::uint64_t>(m - 1) * p;
  rep.predicted.broadcast_reads = static_cast<std::uint64_t>(m) * n * p;
  rep.predicted.global_loads = static_cast<std::uint64_t>(lane_count) * c;
  rep.predicted.global_stores = counted.global_stores;  // store count depends on clamping

  rep.counted = counted;
  rep.counts_match = counted.mads == rep.predicted.mads &&
                     counted.shuffles == rep.predicted.shuffles &&
                     counted.broadcast_reads == rep.predicted.broadcast_reads &&
                     counted.global_loads == rep.predicted.global_loads;
  return rep;
}

}  // namespace ssam
