// ssam command line: run kernels against their oracles, evaluate the
// analytical cost model, sweep benchmark suites, and inspect halo/coverage
// behavior of the overlapped blocking scheme.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssam/blocking.hpp"
#include "ssam/grid_io.hpp"
#include "ssam/kernels.hpp"
#include "ssam/oracle.hpp"
#include "ssam/perf_model.hpp"

using nlohmann::json;
using namespace ssam;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

enum class Precision { f32, f64, i64 };

Precision parse_precision(const std::string& s) {
  if (s == "f32") return Precision::f32;
  if (s == "f64") return Precision::f64;
  if (s == "int") return Precision::i64;
  throw CLI::ValidationError("--precision", "must be one of f32, f64, int");
}

const char* precision_name(Precision p) {
  switch (p) {
    case Precision::f32: return "f32";
    case Precision::f64: return "f64";
    case Precision::i64: return "int";
  }
  return "?";
}

double tolerance_for(Precision p) {
  switch (p) {
    case Precision::f32: return 1e-5;
    case Precision::f64: return 1e-12;
    case Precision::i64: return 0.0;
  }
  return 0.0;
}

json counters_json(const OpCounters& c) {
  return json{{"mads", c.mads},
              {"shuffles", c.shuffles},
              {"broadcast_reads", c.broadcast_reads},
              {"global_loads", c.global_loads},
              {"global_stores", c.global_stores}};
}

// Machine-readable report: one JSON record per line, no timestamps, so the
// same seed and flags always produce identical bytes.
struct RecordSink {
  std::string path;
  std::vector<json> records;

  void add(json j) { records.push_back(std::move(j)); }
  void flush() const {
    if (path.empty()) return;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open --out file: " + path);
    for (const auto& r : records) os << r.dump() << "\n";
  }
};

struct ErrorStats {
  double max_abs = 0;
  double max_rel = 0;

  void update(double got, double want) {
    const double abs = std::abs(got - want);
    max_abs = std::max(max_abs, abs);
    max_rel = std::max(max_rel, abs / std::max(1.0, std::abs(want)));
  }
  template <class T>
  static ErrorStats compare(const std::vector<T>& got, const std::vector<T>& want) {
    ErrorStats e;
    for (std::size_t i = 0; i < got.size(); ++i)
      e.update(static_cast<double>(got[i]), static_cast<double>(want[i]));
    return e;
  }
};

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunSpec {
  std::string kernel = "conv2d";
  int w = 128, h = 128;
  int nx = 64, ny = 64, nz = 64;
  int len = 1024;
  int m = 3, n = 3;
  std::string stencil = "2d5pt";
  int iters = -1;  // default depends on the kernel
  Precision precision = Precision::f64;
  std::uint64_t seed = 0;
  int p = -1;  // -1: kernel-dependent default
  int b = -1;
  Boundary boundary = Boundary::zero;
  int threads = 0;
  std::string profile = "P100";
  std::string out_path;
  std::string input_path;  // load the input grid instead of generating it
  std::string dump_output;
  bool corrupt = false;  // test hook: perturb one output cell
};

KernelConfig config_for(const RunSpec& spec, int stencil_order, bool is_3d) {
  KernelConfig cfg;
  cfg.p = spec.p > 0 ? spec.p : (is_3d ? 2 : 4);
  cfg.b = spec.b > 0 ? spec.b
                     : (is_3d ? std::max(128, 32 * (2 * stencil_order + 1)) : 128);
  cfg.boundary = spec.boundary;
  cfg.threads = spec.threads;
  return cfg;
}

template <class T>
void maybe_corrupt(std::vector<T>& data, bool corrupt) {
  if (corrupt && !data.empty()) data[data.size() / 2] += T{1};
}

template <class T>
int run_typed(const RunSpec& spec, RecordSink& sink) {
  json rec{{"cmd", "run"},
           {"kernel", spec.kernel},
           {"precision", precision_name(spec.precision)},
           {"seed", spec.seed},
           {"boundary", spec.boundary == Boundary::zero ? "zero" : "replicate"}};
  OpCounters counters;
  ErrorStats err;

  auto load_grid2d = [&](int w, int h) {
    if (spec.input_path.empty()) return random_grid2d<T>(w, h, spec.seed);
    std::ifstream is(spec.input_path, std::ios::binary);
    if (!is) throw std::invalid_argument("cannot open --input file: " + spec.input_path);
    return read_grid2d<T>(is);
  };

  if (spec.kernel == "conv2d") {
    auto cfg = config_for(spec, 0, false);
    auto grid = load_grid2d(spec.w, spec.h);
    auto filter = random_filter<T>(spec.m, spec.n, spec.seed + 1);
    auto got = conv2d(grid, filter, cfg, &counters);
    maybe_corrupt(got.data, spec.corrupt);
    auto want = oracle::conv2d_naive(grid, filter, cfg.boundary);
    err = ErrorStats::compare(got.data, want.data);
    rec.update({{"w", grid.width}, {"h", grid.height}, {"m", spec.m}, {"n", spec.n},
                {"p", cfg.p}, {"b", cfg.b}});
    if (!spec.dump_output.empty()) write_grid_file<T>(spec.dump_output, got);
  } else if (spec.kernel == "conv1d") {
    auto cfg = config_for(spec, 0, false);
    SplitMix64 rng(spec.seed);
    std::vector<T> signal(spec.len), filter(spec.m);
    for (auto& v : signal) v = rng.template next_scalar<T>();
    SplitMix64 rng2(spec.seed + 1);
    for (auto& v : filter) v = rng2.template next_coeff<T>();
    auto got = conv1d(signal, filter, cfg, &counters);
    maybe_corrupt(got, spec.corrupt);
    err = ErrorStats::compare(got, oracle::conv1d_naive(signal, filter, cfg.boundary));
    rec.update({{"len", spec.len}, {"m", spec.m}});
  } else if (spec.kernel == "scan") {
    SplitMix64 rng(spec.seed);
    std::vector<T> values(spec.len);
    for (auto& v : values) v = rng.template next_scalar<T>();
    auto got = scan(values, 32, &counters);
    maybe_corrupt(got, spec.corrupt);
    err = ErrorStats::compare(got, oracle::scan_naive(values));
    rec.update({{"len", spec.len}});
  } else if (spec.kernel == "stencil2d") {
    auto st = convert_stencil<T>(make_benchmark_stencil(spec.stencil));
    auto cfg = config_for(spec, st.order, false);
    const int iters = spec.iters > 0 ? spec.iters : 4;
    auto grid = load_grid2d(spec.w, spec.h);
    auto got = stencil2d(grid, st, cfg, iters, &counters);
    maybe_corrupt(got.data, spec.corrupt);
    err = ErrorStats::compare(got.data, oracle::stencil2d_naive(grid, st, iters).data);
    rec.update({{"w", grid.width}, {"h", grid.height}, {"stencil", spec.stencil},
                {"iters", iters}, {"p", cfg.p}, {"b", cfg.b}});
    if (!spec.dump_output.empty()) write_grid_file<T>(spec.dump_output, got);
  } else if (spec.kernel == "stencil3d") {
    auto st = convert_stencil<T>(make_benchmark_stencil(spec.stencil));
    auto cfg = config_for(spec, st.order, true);
    const int iters = spec.iters > 0 ? spec.iters : 2;
    auto grid = random_grid3d<T>(spec.nx, spec.ny, spec.nz, spec.seed);
    auto got = stencil3d(grid, st, cfg, iters, &counters);
    maybe_corrupt(got.data, spec.corrupt);
    err = ErrorStats::compare(got.data, oracle::stencil3d_naive(grid, st, iters).data);
    rec.update({{"nx", spec.nx}, {"ny", spec.ny}, {"nz", spec.nz},
                {"stencil", spec.stencil}, {"iters", iters}, {"p", cfg.p}, {"b", cfg.b}});
    if (!spec.dump_output.empty()) write_grid_file<T>(spec.dump_output, got);
  } else {
    throw CLI::ValidationError("kernel", "unknown kernel " + spec.kernel);
  }

  const double tol = tolerance_for(spec.precision);
  const bool pass = err.max_rel <= tol;
  rec.update({{"max_abs_err", err.max_abs},
              {"max_rel_err", err.max_rel},
              {"tolerance", tol},
              {"counters", counters_json(counters)},
              {"pass", pass}});
  sink.add(rec);

  std::printf("run %s precision=%s seed=%llu\n", spec.kernel.c_str(),
              precision_name(spec.precision),
              static_cast<unsigned long long>(spec.seed));
  std::printf("  max_abs_err=%.3g max_rel_err=%.3g (tolerance %.0e)\n", err.max_abs,
              err.max_rel, tol);
  std::printf("  counters: mads=%llu shuffles=%llu broadcasts=%llu loads=%llu stores=%llu\n",
              static_cast<unsigned long long>(counters.mads),
              static_cast<unsigned long long>(counters.shuffles),
              static_cast<unsigned long long>(counters.broadcast_reads),
              static_cast<unsigned long long>(counters.global_loads),
              static_cast<unsigned long long>(counters.global_stores));
  std::printf("  result: %s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitMismatch;
}

int cmd_run(const RunSpec& spec, RecordSink& sink) {
  if ((spec.kernel == "stencil2d" || spec.kernel == "stencil3d") &&
      spec.precision == Precision::i64)
    throw CLI::ValidationError("--precision",
                               "catalog stencils have fractional coefficients; use f32/f64");
  switch (spec.precision) {
    case Precision::f32: return run_typed<float>(spec, sink);
    case Precision::f64: return run_typed<double>(spec, sink);
    case Precision::i64: return run_typed<long long>(spec, sink);
  }
  return kExitUsage;
}

// ---------------------------------------------------------------------------
// cost
// ---------------------------------------------------------------------------

struct CostSpec {
  int m = 3, n = 3, p = 4;
  std::string profile = "P100";
  std::string sweep;  // "a..b" over both m and n
  bool verify = false;
  std::string t_gmem_read;  // rational override
  std::string hr_smc;       // shared-memory halo ratio; adds an adjusted AvgDif
  std::string out_path;
};

bool verify_counts(int m, int n, int p, const LatencyProfile& prof, CostReport& rep) {
  auto filter = random_filter<long long>(m, n, 1);
  auto plans = conv2d_window_plans(filter, p, 32);
  WarpState<long long> warp(32, n + p - 1);
  warp.load_rows(std::vector<long long>(static_cast<std::size_t>(32) * (n + p - 1), 1));
  run_warp_sweep(warp, plans);
  rep = cross_check(warp.counters(), m, n, p, prof, 32);
  return rep.counts_match;
}

int cmd_cost(const CostSpec& spec, RecordSink& sink) {
  LatencyProfile prof = resolve_profile(spec.profile);
  if (!spec.t_gmem_read.empty()) {
    auto r = Rational::parse(spec.t_gmem_read);
    if (!r) throw CLI::ValidationError("--t-gmem-read", "expects an integer or a/b");
    prof.t_gmem_read = *r;
    prof.check();
  }
  std::optional<Rational> hr_smc;
  if (!spec.hr_smc.empty()) {
    auto r = Rational::parse(spec.hr_smc);
    if (!r) throw CLI::ValidationError("--hr-smc", "expects an integer or a/b in [0, 1)");
    hr_smc = *r;
  }

  int lo = spec.m, hi = spec.m;
  bool square_sweep = false;
  if (!spec.sweep.empty()) {
    if (std::sscanf(spec.sweep.c_str(), "%d..%d", &lo, &hi) != 2 || lo < 1 || hi < lo)
      throw CLI::ValidationError("--sweep", "expects a range like 2..20");
    square_sweep = true;
  }

  std::printf("%4s %4s %10s %10s %10s %12s %14s%s\n", "m", "n", "L_reg", "L_smem", "Dif",
              "HR_rc", "AvgDif", spec.verify ? "  verify" : "");
  bool all_ok = true;
  auto emit = [&](int m, int n) {
    CostReport rep;
    rep.m = m;
    rep.n = n;
    rep.p = spec.p;
    rep.profile = prof.name;
    rep.l_reg = latency_reg(m, n, prof);
    rep.l_smem = latency_smem(m, n, prof);
    rep.dif = dif_smem_reg(m, n, prof);
    rep.avg_dif = avg_dif_lower_bound(m, n, spec.p, prof);
    rep.hr_rc = halo_ratio(32, n + spec.p - 1, m, n);
    bool verified = true;
    if (spec.verify) verified = verify_counts(m, n, spec.p, prof, rep);
    if (m >= 2 && n >= 2 && !(rep.dif > Rational(0))) all_ok = false;
    if (!verified) all_ok = false;

    std::string smc_col;
    if (hr_smc) {
      const Rational adj = avg_dif_lower_bound_smc(m, n, spec.p, prof, *hr_smc);
      smc_col = "  avg_dif[hr_smc=" + hr_smc->to_string() + "]=" + adj.to_string();
    }
    std::printf("%4d %4d %10s %10s %10s %12s %14s%s%s\n", m, n, rep.l_reg.to_string().c_str(),
                rep.l_smem.to_string().c_str(), rep.dif.to_string().c_str(),
                rep.hr_rc.to_string().c_str(), rep.avg_dif.to_string().c_str(),
                smc_col.c_str(),
                spec.verify ? (verified ? "  ok" : "  MISMATCH") : "");
    json rec{{"cmd", "cost"},      {"m", m},
             {"n", n},             {"p", spec.p},
             {"profile", prof.name}, {"l_reg", rep.l_reg.to_string()},
             {"l_smem", rep.l_smem.to_string()}, {"dif", rep.dif.to_string()},
             {"hr_rc", rep.hr_rc.to_string()}, {"avg_dif", rep.avg_dif.to_string()}};
    if (hr_smc)
      rec["avg_dif_smc"] = avg_dif_lower_bound_smc(m, n, spec.p, prof, *hr_smc).to_string();
    if (spec.verify) {
      rec["counts_match"] = verified;
      rec["counters"] = counters_json(rep.counted);
    }
    sink.add(rec);
  };

  if (square_sweep) {
    for (int m = lo; m <= hi; ++m)
      for (int n = lo; n <= hi; ++n) emit(m, n);
  } else {
    emit(spec.m, spec.n);
  }
  return all_ok ? kExitPass : kExitMismatch;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchSpec {
  std::string suite = "conv-sweep";
  int size = -1;  // -1: 512 for conv-sweep, 256 for table3
  int size3d = 64;
  int iters2d = 4;
  int iters3d = 2;
  Precision precision = Precision::i64;
  std::uint64_t seed = 0;
  std::string profile = "P100";
  int threads = 0;
  std::string out_path;
};

template <class T>
bool bench_conv_row(const BenchSpec& spec, int k, const LatencyProfile& prof,
                    RecordSink& sink, Rational& cycles_out) {
  KernelConfig cfg;
  cfg.threads = spec.threads;
  auto grid = random_grid2d<T>(spec.size, spec.size, spec.seed + k);
  auto filter = random_filter<T>(k, k, spec.seed + 1000 + k);
  OpCounters counters;
  auto got = conv2d(grid, filter, cfg, &counters);
  auto want = oracle::conv2d_naive(grid, filter, cfg.boundary);
  auto err = ErrorStats::compare(got.data, want.data);
  const bool pass = err.max_rel <= tolerance_for(spec.precision);

  const auto plan = plan_blocks(spec.size, spec.size, filter, cfg, cfg.lane_count);
  // Model: every warp sweep costs P windows at latency_reg cycles each.
  const Rational cycles =
      Rational(static_cast<long long>(plan.tiles.size()) * cfg.p) * latency_reg(k, k, prof);
  cycles_out = cycles;
  const double cells = static_cast<double>(spec.size) * spec.size;
  const double gcells_per_ghz = cells / cycles.to_double();

  std::printf("%4dx%-4d %14s %12.5f %10llu %10llu  %s\n", k, k,
              cycles.to_string().c_str(), gcells_per_ghz,
              static_cast<unsigned long long>(counters.mads),
              static_cast<unsigned long long>(counters.shuffles), pass ? "PASS" : "FAIL");
  sink.add(json{{"cmd", "bench"},
                {"suite", "conv-sweep"},
                {"m", k},
                {"n", k},
                {"size", spec.size},
                {"precision", precision_name(spec.precision)},
                {"seed", spec.seed},
                {"profile", prof.name},
                {"modeled_cycles", cycles.to_string()},
                {"model_gcells_per_ghz", gcells_per_ghz},
                {"max_rel_err", err.max_rel},
                {"counters", counters_json(counters)},
                {"verified", pass}});
  return pass;
}

template <class T>
bool bench_table3_row(const BenchSpec& spec, const std::string& name, RecordSink& sink) {
  auto st = convert_stencil<T>(make_benchmark_stencil(name));
  const bool is3d = st.dims == 3;
  KernelConfig cfg;
  cfg.threads = spec.threads;
  double rel;
  OpCounters counters;
  int domain;
  int iters;
  if (is3d) {
    cfg.p = 2;
    cfg.b = std::max(256, 32 * (2 * st.order + 1));
    domain = spec.size3d;
    iters = spec.iters3d;
    auto grid = random_grid3d<T>(domain, domain, domain, spec.seed);
    auto got = stencil3d(grid, st, cfg, iters, &counters);
    rel = ErrorStats::compare(got.data, oracle::stencil3d_naive(grid, st, iters).data).max_rel;
  } else {
    domain = spec.size;
    iters = spec.iters2d;
    auto grid = random_grid2d<T>(domain, domain, spec.seed);
    auto got = stencil2d(grid, st, cfg, iters, &counters);
    rel = ErrorStats::compare(got.data, oracle::stencil2d_naive(grid, st, iters).data).max_rel;
  }
  const bool pass = rel <= tolerance_for(spec.precision);
  std::printf("%-10s k=%d fpp=%-4d %6d^%d iters=%d rel=%.3g  %s\n", name.c_str(), st.order,
              st.fpp, domain, is3d ? 3 : 2, iters, rel, pass ? "PASS" : "FAIL");
  sink.add(json{{"cmd", "bench"},
                {"suite", "table3"},
                {"benchmark", name},
                {"order", st.order},
                {"fpp", st.fpp},
                {"dims", is3d ? 3 : 2},
                {"size", domain},
                {"iters", iters},
                {"precision", precision_name(spec.precision)},
                {"seed", spec.seed},
                {"max_rel_err", rel},
                {"counters", counters_json(counters)},
                {"verified", pass}});
  return pass;
}

int cmd_bench(const BenchSpec& spec, RecordSink& sink) {
  LatencyProfile prof = resolve_profile(spec.profile);
  bool all_pass = true;
  if (spec.suite == "conv-sweep") {
    std::printf("%9s %14s %12s %10s %10s  %s\n", "filter", "model_cycles",
                "gcells/GHz", "mads", "shuffles", "verify");
    Rational prev{0};
    for (int k = 2; k <= 20; ++k) {
      Rational cycles{0};
      bool pass = false;
      switch (spec.precision) {
        case Precision::f32: pass = bench_conv_row<float>(spec, k, prof, sink, cycles); break;
        case Precision::f64: pass = bench_conv_row<double>(spec, k, prof, sink, cycles); break;
        case Precision::i64: pass = bench_conv_row<long long>(spec, k, prof, sink, cycles); break;
      }
      all_pass = all_pass && pass && (k == 2 || cycles > prev);
      prev = cycles;
    }
  } else if (spec.suite == "table3") {
    if (spec.precision == Precision::i64)
      throw CLI::ValidationError("--precision",
                                 "catalog stencils have fractional coefficients; use f32/f64");
    for (const auto& name : benchmark_stencil_names()) {
      bool pass = spec.precision == Precision::f32
                      ? bench_table3_row<float>(spec, name, sink)
                      : bench_table3_row<double>(spec, name, sink);
      all_pass = all_pass && pass;
    }
  } else {
    throw CLI::ValidationError("--suite", "must be conv-sweep or table3");
  }
  std::printf("bench %s: %s\n", spec.suite.c_str(), all_pass ? "PASS" : "FAIL");
  return all_pass ? kExitPass : kExitMismatch;
}

// ---------------------------------------------------------------------------
// halo
// ---------------------------------------------------------------------------

struct HaloSpec {
  int w = 512, h = 512;
  int m = 3, n = 3;
  int p = 4, b = 128;
  std::string dump_plan;
  std::string out_path;
};

int cmd_halo(const HaloSpec& spec, RecordSink& sink) {
  KernelConfig cfg;
  cfg.p = spec.p;
  cfg.b = spec.b;
  auto plan = plan_blocks(spec.w, spec.h, spec.m, spec.n, cfg, cfg.lane_count);
  if (!spec.dump_plan.empty()) {
    std::ofstream os(spec.dump_plan, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open --dump-plan file: " + spec.dump_plan);
    os << block_plan_to_text(plan);
  }
  auto rep = measure_redundancy_report(plan);
  auto formula = halo_ratio(cfg.lane_count, plan.c, spec.m, spec.n);
  auto cov = check_coverage(plan);

  std::printf("halo %dx%d filter %dx%d p=%d b=%d (S=%d, C=%d)\n", spec.w, spec.h, spec.m,
              spec.n, spec.p, spec.b, cfg.lane_count, plan.c);
  std::printf("  grid_dim = %d x %d, warps/block = %d, active tiles = %zu\n",
              plan.grid_dim_x, plan.grid_dim_y, plan.warp_count, plan.tiles.size());
  std::printf("  HR_rc formula        = %s (%.4f)\n", formula.to_string().c_str(),
              formula.to_double());
  std::printf("  measured (interior)  = %s over %llu tiles\n",
              rep.interior_fraction.to_string().c_str(),
              static_cast<unsigned long long>(rep.interior_tiles));
  std::printf("  first-touch overlap  = %s (%.4f)\n",
              rep.first_touch_fraction.to_string().c_str(),
              rep.first_touch_fraction.to_double());
  std::printf("  coverage: %s (missing=%llu duplicated=%llu)\n",
              cov.exact ? "exact" : "BROKEN", static_cast<unsigned long long>(cov.missing),
              static_cast<unsigned long long>(cov.duplicated));

  sink.add(json{{"cmd", "halo"},
                {"w", spec.w},
                {"h", spec.h},
                {"m", spec.m},
                {"n", spec.n},
                {"p", spec.p},
                {"b", spec.b},
                {"s", cfg.lane_count},
                {"c", plan.c},
                {"grid_dim_x", plan.grid_dim_x},
                {"grid_dim_y", plan.grid_dim_y},
                {"tiles", plan.tiles.size()},
                {"hr_rc", formula.to_string()},
                {"measured", rep.interior_fraction.to_string()},
                {"first_touch", rep.first_touch_fraction.to_string()},
                {"coverage_exact", cov.exact}});
  const bool match = rep.interior_tiles == 0 || rep.interior_fraction == formula;
  return cov.exact && match ? kExitPass : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"software systolic warp simulator and analytical cost model"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for grid height
  app.require_subcommand(1);

  RunSpec run_spec;
  CostSpec cost_spec;
  BenchSpec bench_spec;
  HaloSpec halo_spec;
  std::string run_precision = "f64", bench_precision, run_boundary = "zero";

  auto* run = app.add_subcommand("run", "execute one kernel and compare with its oracle");
  run->set_help_flag("--help", "print help");
  run->add_option("kernel", run_spec.kernel, "conv1d|conv2d|stencil2d|stencil3d|scan")
      ->required()
      ->check(CLI::IsMember({"conv1d", "conv2d", "stencil2d", "stencil3d", "scan"}));
  run->add_option("--w", run_spec.w, "grid width");
  run->add_option("--h", run_spec.h, "grid height");
  run->add_option("--nx", run_spec.nx, "3D grid x extent");
  run->add_option("--ny", run_spec.ny, "3D grid y extent");
  run->add_option("--nz", run_spec.nz, "3D grid z extent");
  run->add_option("--len", run_spec.len, "1D input length");
  run->add_option("--m", run_spec.m, "filter taps across lanes");
  run->add_option("--n", run_spec.n, "filter taps along the cache");
  run->add_option("--stencil", run_spec.stencil, "benchmark stencil name");
  run->add_option("--iters", run_spec.iters, "stencil sweeps");
  run->add_option("--seed", run_spec.seed, "input generator seed");
  run->add_option("--p", run_spec.p, "outputs per lane");
  run->add_option("--b", run_spec.b, "threads per block");
  run->add_option("--precision", run_precision, "f32|f64|int");
  run->add_option("--boundary", run_boundary, "zero|replicate")
      ->check(CLI::IsMember({"zero", "replicate"}));
  run->add_option("--threads", run_spec.threads, "worker threads (0 = all)");
  run->add_option("--profile", run_spec.profile, "latency profile name or file");
  run->add_option("--out", run_spec.out_path, "machine-readable report path");
  run->add_option("--input", run_spec.input_path,
                  "load the 2D input grid from a binary grid file instead of generating it");
  run->add_option("--dump-output", run_spec.dump_output, "write the result grid (binary)");
  run->add_flag("--corrupt", run_spec.corrupt, "fault-injection hook for tests")
      ->group("");

  auto* cost = app.add_subcommand("cost", "evaluate the latency model");
  cost->set_help_flag("--help", "print help");
  cost->add_option("--m", cost_spec.m, "filter taps across lanes");
  cost->add_option("--n", cost_spec.n, "filter taps along the cache");
  cost->add_option("--p", cost_spec.p, "outputs per lane");
  cost->add_option("--profile", cost_spec.profile, "latency profile name or file");
  cost->add_option("--sweep", cost_spec.sweep, "range like 2..20 over m and n");
  cost->add_flag("--verify", cost_spec.verify, "cross-check counts against the simulator");
  cost->add_option("--t-gmem-read", cost_spec.t_gmem_read,
                   "override global-read latency (cycles, integer or a/b)");
  cost->add_option("--hr-smc", cost_spec.hr_smc,
                   "shared-memory halo ratio in [0, 1); reports an adjusted AvgDif");
  cost->add_option("--out", cost_spec.out_path, "machine-readable report path");

  auto* bench = app.add_subcommand("bench", "run a benchmark suite with verification");
  bench->set_help_flag("--help", "print help");
  bench->add_option("--suite", bench_spec.suite, "conv-sweep|table3");
  bench->add_option("--size", bench_spec.size, "2D domain edge");
  bench->add_option("--size3d", bench_spec.size3d, "3D domain edge");
  bench->add_option("--iters2d", bench_spec.iters2d, "2D stencil sweeps");
  bench->add_option("--iters3d", bench_spec.iters3d, "3D stencil sweeps");
  bench->add_option("--precision", bench_precision,
                    "f32|f64|int (default: int for conv-sweep, f64 for table3)");
  bench->add_option("--seed", bench_spec.seed, "input generator seed");
  bench->add_option("--profile", bench_spec.profile, "latency profile name or file");
  bench->add_option("--threads", bench_spec.threads, "worker threads (0 = all)");
  bench->add_option("--out", bench_spec.out_path, "machine-readable report path");

  auto* halo = app.add_subcommand("halo", "halo-ratio and coverage diagnostics");
  halo->set_help_flag("--help", "print help");
  halo->add_option("--w", halo_spec.w, "domain width");
  halo->add_option("--h", halo_spec.h, "domain height");
  halo->add_option("--m", halo_spec.m, "filter taps across lanes");
  halo->add_option("--n", halo_spec.n, "filter taps along the cache");
  halo->add_option("--p", halo_spec.p, "outputs per lane");
  halo->add_option("--b", halo_spec.b, "threads per block");
  halo->add_option("--dump-plan", halo_spec.dump_plan, "write the block decomposition as text");
  halo->add_option("--out", halo_spec.out_path, "machine-readable report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RecordSink sink;
    int code = kExitUsage;
    if (*run) {
      run_spec.precision = parse_precision(run_precision);
      run_spec.boundary = run_boundary == "zero" ? Boundary::zero : Boundary::replicate;
      sink.path = run_spec.out_path;
      code = cmd_run(run_spec, sink);
    } else if (*cost) {
      sink.path = cost_spec.out_path;
      code = cmd_cost(cost_spec, sink);
    } else if (*bench) {
      if (bench_precision.empty())
        bench_precision = bench_spec.suite == "table3" ? "f64" : "int";
      bench_spec.precision = parse_precision(bench_precision);
      if (bench_spec.size < 0) bench_spec.size = bench_spec.suite == "table3" ? 256 : 512;
      sink.path = bench_spec.out_path;
      code = cmd_bench(bench_spec, sink);
    } else if (*halo) {
      sink.path = halo_spec.out_path;
      code = cmd_halo(halo_spec, sink);
    }
    sink.flush();
    return code;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
}
