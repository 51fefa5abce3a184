// Acceptance suite: one PASS/FAIL line per criterion.
//
//   facspeed_acceptance                 all criteria
//   facspeed_acceptance --criterion 5   one criterion
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facspeed/benchmarks.hpp"
#include "facspeed/harness.hpp"
#include "facspeed/measures.hpp"
#include "facspeed/report.hpp"
#include "facspeed/runtime.hpp"
#include "oracles.hpp"

using namespace facspeed;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

constexpr std::size_t kRequiredCores = 4;

std::optional<Outcome> require_cores(std::size_t needed) {
  const std::size_t have = rt::physical_cores();
  if (have >= needed) return std::nullopt;
  return Outcome{false, fmt("hardware precondition unmet: %zu physical core(s), need %zu", have, needed)};
}

rt::RuntimeOptions oversubscribed() {
  rt::RuntimeOptions o;
  o.allow_oversubscription = true;
  return o;
}

harness::ResultSet run_plan(const std::string& bench, const bench::Params& params,
                            std::vector<std::size_t> procs, std::size_t reps,
                            std::size_t warmups = 1, bool adaptive = false) {
  harness::ExperimentPlan plan;
  plan.benchmark_id = bench;
  plan.params = params;
  plan.procs = std::move(procs);
  plan.reps = reps;
  plan.warmup_runs = warmups;
  plan.adaptive_t1 = adaptive;
  plan.isolate = false;
  return harness::run_experiment(plan);
}

double mean_seconds(const std::vector<harness::RunSample>& samples) {
  double sum = 0;
  for (const auto& s : samples) sum += to_seconds(s.wall_time);
  return sum / static_cast<double>(samples.size());
}

// Identities that must hold exactly for every run.
std::optional<std::string> accounting_violation(const rt::RunStats& s) {
  Nanos sum = 0;
  for (const auto& w : s.per_worker) sum += w.idle_total;
  if (sum != s.idle_total) return fmt("I_P %lld != sum of per-worker idle %lld", (long long)s.idle_total, (long long)sum);
  if (s.total_idle_phases > (s.num_workers - 1) + s.total_steals) {
    return fmt("idle phases %llu > (P-1) + steals = %llu", (unsigned long long)s.total_idle_phases,
               (unsigned long long)((s.num_workers - 1) + s.total_steals));
  }
  if (s.idle_total < 0 || s.idle_total > static_cast<Nanos>(s.num_workers) * s.wall_time) {
    return std::string("I_P outside [0, P*T_P]");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  std::size_t runs = 0;
  auto check = [&](const rt::RunStats& s) -> std::optional<std::string> {
    ++runs;
    return accounting_violation(s);
  };
  for (std::size_t p = 1; p <= std::max<std::size_t>(4, rt::physical_cores()); ++p) {
    for (int rep = 0; rep < 5; ++rep) {
      auto input = bench::sort_input(200'000, static_cast<std::uint64_t>(rep));
      auto r = check(rt::launch(p, [&] { bench::cilksort(input, bench::Mode::parallel, 200); }, oversubscribed()));
      if (r) return {false, "cilksort P=" + std::to_string(p) + ": " + *r};

      bench::ArrayBench arr({100'000, 2, 8, 10, 500});
      r = check(rt::launch(p, [&] { arr.run(bench::Mode::parallel); }, oversubscribed()));
      if (r) return {false, "array P=" + std::to_string(p) + ": " + *r};

      std::uint64_t leaves = 0;
      std::function<std::uint64_t(int)> tree = [&](int d) -> std::uint64_t {
        if (d == 0) return 1;
        std::uint64_t a = 0, b = 0;
        rt::fork2([&] { a = tree(d - 1); }, [&] { b = tree(d - 1); });
        return a + b;
      };
      r = check(rt::launch(p, [&] { leaves = tree(16); }, oversubscribed()));
      if (r) return {false, "fork tree P=" + std::to_string(p) + ": " + *r};
    }
  }
  return {true, fmt("%zu runs, P up to %zu", runs, std::max<std::size_t>(4, rt::physical_cores()))};
}

Outcome criterion_2() {
  std::mt19937_64 rng(20240101);
  const int n = 10'000;
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    const measures::MeasureSummary s = oracle::random_summary(rng);
    const measures::CurveSet c = measures::speedup_curves(s);
    const double scale = std::exp(std::uniform_real_distribution<double>(-12, 12)(rng));
    measures::MeasureSummary scaled = s;
    scaled.baseline_time *= scale;
    scaled.one_core_time *= scale;
    if (scaled.elision_time) *scaled.elision_time *= scale;
    for (auto& [p, v] : scaled.per_p) {
      v.parallel_time *= scale;
      v.idle_time *= scale;
    }
    const measures::CurveSet d = measures::speedup_curves(scaled);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const auto& pt = c.points[i];
      const auto& per = s.per_p.at(pt.p);
      const double P = static_cast<double>(pt.p);
      const double t_s = s.baseline_time;
      auto rel = [](double a, double b) { return a == b ? 0.0 : std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); };
      const double e1 = rel(1 / pt.actual, 1 / pt.maximal + per.idle_time / (P * t_s) + pt.work_inflation / (P * t_s));
      const double e2 = rel((s.one_core_time + per.idle_time + pt.work_inflation) / P, per.parallel_time);
      double e3 = std::max({rel(pt.maximal, d.points[i].maximal), rel(pt.idle_specific, d.points[i].idle_specific),
                            rel(pt.inflation_specific, d.points[i].inflation_specific),
                            rel(pt.actual, d.points[i].actual)});
      if (pt.elision_bound) e3 = std::max(e3, rel(*pt.elision_bound, *d.points[i].elision_bound));
      worst = std::max({worst, e1, e2, e3});
      if (worst > 1e-9) {
        return {false, fmt("summary %d P=%zu: relative error %.3g", k, pt.p, worst)};
      }
    }
  }
  return {true, fmt("%d random summaries, worst relative error %.2g", n, worst)};
}

Outcome criterion_3() {
  const bench::Params params{{"n", "1000000"}, {"cutoff", "1000"}};
  const harness::ResultSet set = run_plan("cilksort", params, {1}, 5);
  if (!set.summary) return {false, "no summary"};
  const auto& s = *set.summary;
  const double f1 = measures::work_inflation(1, s.per_p.at(1).parallel_time, s.per_p.at(1).idle_time,
                                             s.one_core_time);
  const double frac = std::fabs(f1) / s.one_core_time;
  return {frac <= 0.05, fmt("T_1 %.4f s, F_1 %+.5f s (%.2f%% of T_1, limit 5%%)", s.one_core_time, f1, 100 * frac)};
}

Outcome criterion_4() {
  if (auto fail = require_cores(kRequiredCores)) return *fail;
  const bench::Params params{{"n", "1000000"}, {"cutoff", "1000000"}};
  const harness::ResultSet set = run_plan("cilksort", params, {1, 2, 3, 4}, 3);
  if (!set.summary) return {false, "no summary"};
  const measures::CurveSet c = measures::speedup_curves(*set.summary);
  const auto& pt = c.points.back();
  const double t_s = set.summary->baseline_time;
  const double t_1 = set.summary->one_core_time;
  const bool idle_ok = pt.idle_specific <= 1.3;
  const bool max_ok = pt.maximal >= 0.8 * (t_s / t_1) * 4;
  const bool starved = report::diagnose(c).has(report::FindingCode::parallelism_starved);
  return {idle_ok && max_ok && starved,
          fmt("P=4 idle_specific %.3f (<= 1.3), maximal %.3f (>= %.3f), parallelism_starved %s",
              pt.idle_specific, pt.maximal, 0.8 * (t_s / t_1) * 4, starved ? "yes" : "no")};
}

// r giving a baseline of about `target` seconds.
std::size_t calibrate_repetitions(bench::ArrayBenchConfig cfg, double target) {
  cfg.r = 1;
  bench::ArrayBench b(cfg);
  double t = 0;
  while (true) {
    const Nanos start = now();
    b.run(bench::Mode::baseline);
    t = to_seconds(now() - start);
    if (t >= 0.05) break;
    cfg.r *= 4;
    b = bench::ArrayBench(cfg);
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(target / t * static_cast<double>(cfg.r))));
}

bench::Params array_params(const bench::ArrayBenchConfig& c) {
  return {{"m", std::to_string(c.m)}, {"l", std::to_string(c.l)}, {"g", std::to_string(c.g)},
          {"r", std::to_string(c.r)}, {"grain", std::to_string(c.grain)}};
}

bench::ArrayBenchConfig compute_bound_config() {
  bench::ArrayBenchConfig cfg{10'000, 64, 1, 1, 1000};
  cfg.r = calibrate_repetitions(cfg, 2.0);
  return cfg;
}

Outcome criterion_5() {
  if (auto fail = require_cores(kRequiredCores)) return *fail;
  const bench::ArrayBenchConfig cfg = compute_bound_config();
  const harness::ResultSet set = run_plan("array_gap", array_params(cfg), {4}, 3);
  if (!set.summary) return {false, "no summary"};
  const auto pt = measures::speedup_curves(*set.summary).points.back();
  const bool ok = pt.actual >= 3.0 && pt.inflation_specific >= 0.85 * pt.maximal;
  return {ok, fmt("r=%zu, T_s %.3f s, P=4 actual %.3f (>= 3.0), inflation_specific %.3f (>= %.3f)", cfg.r,
                  set.summary->baseline_time, pt.actual, pt.inflation_specific, 0.85 * pt.maximal)};
}

std::size_t llc_bytes() {
  std::size_t best_level = 0, size = 0;
  for (const auto& entry : std::filesystem::directory_iterator("/sys/devices/system/cpu/cpu0/cache")) {
    if (entry.path().filename().string().rfind("index", 0) != 0) continue;
    std::ifstream level_in(entry.path() / "level"), size_in(entry.path() / "size");
    std::size_t level = 0;
    std::string text;
    if (!(level_in >> level) || !(size_in >> text) || text.empty()) continue;
    std::size_t bytes = std::stoull(text);
    if (text.back() == 'K') bytes <<= 10;
    if (text.back() == 'M') bytes <<= 20;
    if (level >= best_level) {
      best_level = level;
      size = bytes;
    }
  }
  return size;
}

Outcome criterion_6() {
  if (auto fail = require_cores(kRequiredCores)) return *fail;
  const std::size_t max_p = rt::physical_cores();
  const std::size_t llc = llc_bytes();
  if (llc == 0) return {false, "cannot determine the last-level cache size"};
  // 8x the cache, in 8-byte cells, rounded up to a multiple of the gap.
  std::size_t m_large = (8 * llc / sizeof(std::uint64_t) + 31) / 32 * 32;
  const std::size_t m_small = 10'016;  // cache resident, multiple of 32
  const bench::ArrayBenchConfig large{m_large, 1, 32, bench::sweep_repetitions(m_large), 1000};
  const bench::ArrayBenchConfig small{m_small, 1, 32, bench::sweep_repetitions(m_small), 1000};

  auto inflation_at_max = [&](const bench::ArrayBenchConfig& cfg, double* actual) {
    const harness::ResultSet set = run_plan("array_gap", array_params(cfg), {max_p}, 3);
    const auto pt = measures::speedup_curves(set.summary.value()).points.back();
    if (actual) *actual = pt.actual;
    return pt.work_inflation;
  };
  double actual_large = 0, actual_compute = 0;
  const double f_large = inflation_at_max(large, &actual_large);
  const double f_small = inflation_at_max(small, nullptr);
  // The compute-bound configuration at the same P.
  (void)inflation_at_max(compute_bound_config(), &actual_compute);

  const bool inflation_ok = f_large > 0 && f_large >= 3 * f_small;
  const bool speedup_ok = actual_large <= 0.8 * actual_compute;
  return {inflation_ok && speedup_ok,
          fmt("P=%zu, m=%zu: F_P %.4f s vs cache-resident %.4f s (need >= 3x); actual %.2f vs compute-bound %.2f "
              "(need <= 80%%)",
              max_p, m_large, f_large, f_small, actual_large, actual_compute)};
}

Outcome criterion_7() {
  std::size_t pairs = 0;
  for (std::size_t g : {1, 2, 4, 8, 32}) {
    for (std::size_t m = g; m <= 64 * g; m += g) {
      std::vector<std::size_t> perm(m);
      for (std::size_t i = 0; i < m; ++i) {
        perm[i] = bench::gap_index(i, g, m);
        if (perm[i] != oracle::gap_index(i, g, m)) return {false, fmt("g=%zu m=%zu i=%zu differs from formula", g, m, i)};
      }
      if (!oracle::is_permutation_of_range(perm)) return {false, fmt("g=%zu m=%zu is not a bijection", g, m)};
      ++pairs;
    }
  }
  std::vector<std::size_t> raw;
  for (std::size_t i = 0; i < 10; ++i) raw.push_back(oracle::gap_index(i, 3, 10));
  if (oracle::is_permutation_of_range(raw)) return {false, "oracle: (10, 3) unexpectedly bijective"};
  try {
    (void)bench::gap_index(0, 3, 10);
    return {false, "(m=10, g=3) accepted"};
  } catch (const ConfigError&) {
  }
  return {true, fmt("%zu (g, m) pairs bijective; (m=10, g=3) rejected", pairs)};
}

Outcome criterion_8() {
  std::size_t sorts = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto input = bench::sort_input(10'000, seed);
    auto expect = input;
    bench::quicksort(expect);
    for (std::size_t cutoff : {std::size_t{1000}, std::size_t{64}}) {
      for (std::size_t p : {1, 2, 4}) {
        auto got = input;
        rt::launch(p, [&] { bench::cilksort(got, bench::Mode::parallel, cutoff); }, oversubscribed());
        if (got != expect) return {false, fmt("cilksort differs: seed %llu, P=%zu, cutoff %zu", (unsigned long long)seed, p, cutoff)};
        ++sorts;
      }
    }
  }
  std::size_t checks = 0;
  const std::vector<bench::ArrayBenchConfig> configs{
      {1000, 1, 1, 1, 1000}, {4096, 3, 32, 7, 100}, {65'536, 2, 8, 3, 1000}, {10'000, 64, 1, 2, 250}};
  for (const auto& cfg : configs) {
    const std::uint64_t expect = cfg.m * cfg.r * cfg.l;
    bench::ArrayBench b(cfg);
    auto verify = [&](const char* what, std::size_t p) -> std::optional<Outcome> {
      ++checks;
      if (b.checksum() != expect) {
        return Outcome{false, fmt("array m=%zu %s P=%zu: checksum %llu != %llu", cfg.m, what, p,
                                  (unsigned long long)b.checksum(), (unsigned long long)expect)};
      }
      return std::nullopt;
    };
    b.run(bench::Mode::baseline);
    if (auto f = verify("baseline", 1)) return *f;
    b.reset();
    b.run(bench::Mode::elision);
    if (auto f = verify("elision", 1)) return *f;
    for (std::size_t p : {1, 2, 4}) {
      b.reset();
      rt::launch(p, [&] { b.run(bench::Mode::parallel); }, oversubscribed());
      if (auto f = verify("parallel", p)) return *f;
    }
  }
  return {true, fmt("%zu cilksort runs equal quicksort; %zu array checksums equal m*r*l", sorts, checks)};
}

struct ElisionCheck {
  bool pass = false;
  std::string detail;
};

// Interleaves elision and one-core runs so drift hits both equally.
ElisionCheck elision_check(const std::string& bench_id, const bench::Params& params) {
  constexpr int kReps = 7;
  std::vector<harness::RunSample> base, elision, one_core;
  for (int rep = -1; rep < kReps; ++rep) {
    auto b = harness::run_single(bench_id, params, harness::RunKind::baseline, 1);
    auto e = harness::run_single(bench_id, params, harness::RunKind::elision, 1);
    auto o = harness::run_single(bench_id, params, harness::RunKind::one_core, 1);
    if (rep < 0) continue;  // warmup
    base.push_back(b);
    elision.push_back(e);
    one_core.push_back(o);
  }
  measures::MeasureSummary s;
  s.baseline_time = mean_seconds(base);
  s.one_core_time = mean_seconds(one_core);
  s.elision_time = mean_seconds(elision);
  // Parallel times only position the other curves; maximal and the elision
  // bound depend on T_s, T_1 and T_elision alone.
  harness::RunOptions ro;
  ro.allow_oversubscription = true;
  for (std::size_t p : {1, 2, 4}) {
    auto r = harness::run_single(bench_id, params, harness::RunKind::parallel, p, ro);
    s.per_p[p] = {to_seconds(r.wall_time), to_seconds(r.idle_time), 1};
  }
  const double ratio = *s.elision_time / s.one_core_time;
  const bool bound_ok = ratio <= 1.05;

  report::PlotSpec spec;
  spec.curves = measures::speedup_curves(s);
  spec.show_elision = true;
  const std::string svg = report::emit_svg(spec);
  const auto el = oracle::polyline(svg, "elision_bound");
  const auto mx = oracle::polyline(svg, "maximal");
  bool render_ok = el.size() == mx.size() && !el.empty();
  double worst = -1e9;
  for (std::size_t i = 0; render_ok && i < el.size(); ++i) {
    // Smaller y is higher on the plot; allow the 0.01 px output rounding.
    worst = std::max(worst, el[i].second - mx[i].second);
    render_ok = el[i].second <= mx[i].second + 0.01;
  }
  return {bound_ok && render_ok,
          fmt("%s: T_elision/T_1 = %.4f (<= 1.05), S_1 %.4f s, elision curve %s maximal (worst dy %+.2f px)",
              bench_id.c_str(), ratio, s.one_core_time - *s.elision_time, render_ok ? "at/above" : "BELOW", worst)};
}

Outcome criterion_9() {
  const ElisionCheck sort = elision_check("cilksort", {{"n", "1000000"}, {"cutoff", "50"}});
  const ElisionCheck arr = elision_check("array_gap", {{"m", "1000000"}, {"l", "1"}, {"g", "1"}, {"r", "20"}, {"grain", "64"}});
  return {sort.pass && arr.pass, sort.detail + "; " + arr.detail};
}

Outcome criterion_10() {
  if (auto fail = require_cores(kRequiredCores)) return *fail;
  const bench::Params params{{"n", "10000000"}, {"cutoff", "1000"}};
  harness::RunOptions on, off;
  off.instrument_idle = false;
  (void)harness::run_single("cilksort", params, harness::RunKind::parallel, 4, on);
  double sum_on = 0, sum_off = 0;
  for (int rep = 0; rep < 5; ++rep) {
    sum_on += to_seconds(harness::run_single("cilksort", params, harness::RunKind::parallel, 4, on).wall_time);
    sum_off += to_seconds(harness::run_single("cilksort", params, harness::RunKind::parallel, 4, off).wall_time);
  }
  const double diff = std::fabs(sum_on - sum_off) / sum_off;
  return {diff <= 0.02, fmt("mean T_4 instrumented %.4f s, compiled out %.4f s, difference %.2f%% (<= 2%%)",
                            sum_on / 5, sum_off / 5, 100 * diff)};
}

Outcome criterion_11() {
  harness::ExperimentPlan plan;
  plan.benchmark_id = "noop";
  plan.procs = {1};
  std::vector<harness::RunSample> samples;
  auto add = [&](harness::RunKind kind, double wall) {
    harness::RunSample s;
    s.benchmark_id = "noop";
    s.kind = kind;
    s.wall_time = from_seconds(wall);
    samples.push_back(s);
  };
  add(harness::RunKind::baseline, 4.0);
  add(harness::RunKind::baseline, 4.0);
  add(harness::RunKind::elision, 4.0);
  add(harness::RunKind::one_core, 4.0);
  add(harness::RunKind::parallel, 1.0);
  add(harness::RunKind::parallel, 2.0);
  const auto summary = harness::summarize(plan, samples);
  if (!summary) return {false, "no summary"};
  const double actual = measures::speedup_curves(*summary).points.at(0).actual;
  const bool ok = std::fabs(actual - 4.0 / 1.5) < 1e-12 && std::fabs(actual - 3.0) > 0.3;
  return {ok, fmt("T_s=4, T_P in {1, 2}: engine reports %.4f (ratio of means 2.667, mean of ratios 3.0)", actual)};
}

Outcome criterion_12() {
  // Results file.
  harness::ResultSet set = run_plan("cilksort", {{"n", "50000"}, {"cutoff", "500"}}, {1}, 3, 0);
  set.holes.push_back({harness::RunKind::parallel, 2, std::nullopt, "no successful samples"});
  const auto path = (std::filesystem::temp_directory_path() / "facspeed_acceptance_12.json").string();
  harness::save_results(set, path);
  const harness::ResultSet back = harness::load_results(path);
  std::filesystem::remove(path);
  const bool file_ok = back.samples == set.samples && back.plan == set.plan && back.holes == set.holes &&
                       back.failures == set.failures && back.isolated == set.isolated &&
                       back.schema_version == set.schema_version && back.summary.has_value() &&
                       back.summary->baseline_time == set.summary->baseline_time &&
                       back.summary->one_core_time == set.summary->one_core_time &&
                       back.summary->elision_time == set.summary->elision_time &&
                       back.summary->per_p.at(1).parallel_time == set.summary->per_p.at(1).parallel_time &&
                       back.summary->per_p.at(1).idle_time == set.summary->per_p.at(1).idle_time &&
                       harness::results_to_json(back) == harness::results_to_json(set);
  if (!file_ok) return {false, "results file round trip changed the set"};

  // CSV.
  std::mt19937_64 rng(12);
  double worst = 0;
  for (int k = 0; k < 500; ++k) {
    const measures::CurveSet c = measures::speedup_curves(oracle::random_summary(rng));
    const measures::CurveSet d = report::parse_csv(report::emit_csv(c));
    if (d.points.size() != c.points.size()) return {false, "CSV round trip lost rows"};
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const auto& a = c.points[i];
      const auto& b = d.points[i];
      for (auto [x, y] : {std::pair{a.maximal, b.maximal}, {a.idle_specific, b.idle_specific},
                          {a.inflation_specific, b.inflation_specific}, {a.actual, b.actual},
                          {a.work_inflation, b.work_inflation}, {a.parallel_work, b.parallel_work},
                          {a.linear, b.linear}}) {
        worst = std::max(worst, x == y ? 0.0 : std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y)));
      }
      if (a.p != b.p || a.elision_bound.has_value() != b.elision_bound.has_value()) return {false, "CSV round trip changed P or elision"};
    }
  }
  if (worst > 1e-9) return {false, fmt("CSV round trip relative error %.3g", worst)};

  // SVG.
  report::PlotSpec spec;
  spec.title = "factored speedup";
  spec.curves = measures::speedup_curves(oracle::layered_summary());
  spec.annotate_gaps = true;
  const std::string svg = report::emit_svg(spec);
  if (auto err = oracle::xml_error(svg)) return {false, "SVG not well-formed: " + *err};
  const char* order[] = {"linear", "maximal", "idle_specific", "inflation_specific", "actual"};
  std::vector<std::vector<std::pair<double, double>>> lines;
  for (const char* name : order) lines.push_back(oracle::polyline(svg, name));
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (lines[k].size() != spec.curves.points.size()) return {false, std::string("SVG curve missing points: ") + order[k]};
  }
  for (std::size_t i = 0; i < spec.curves.points.size(); ++i) {
    const auto& pt = spec.curves.points[i];
    const double values[] = {pt.linear, pt.maximal, pt.idle_specific, pt.inflation_specific, pt.actual};
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = 0; b < 5; ++b) {
        // Numerically larger must render at least as high (smaller y).
        if (values[a] > values[b] && lines[a][i].second > lines[b][i].second + 0.005) {
          return {false, fmt("P=%zu: %s above %s numerically but rendered lower", pt.p, order[a], order[b])};
        }
      }
    }
  }
  return {true, fmt("results file identical after save/load (%zu samples); CSV worst error %.2g; SVG well-formed, order holds at %zu P values",
                    set.samples.size(), worst, spec.curves.points.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facspeed acceptance suite"};
  std::optional<int> only;
  app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12};

  int failures = 0;
  for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
    if (only && *only != n) continue;
    Outcome o;
    const Nanos start = now();
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = to_seconds(now() - start);
    std::printf("criterion %d: %s (%.1f s) %s\n", n, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
