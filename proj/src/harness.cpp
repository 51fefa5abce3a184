#include "facspeed/harness.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "facspeed/runtime.hpp"
#include "subprocess.hpp"

namespace facspeed::harness {
namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buf, static_cast<int>(ms.count()));
  return out;
}

bench::Mode mode_for(RunKind kind) {
  switch (kind) {
    case RunKind::baseline: return bench::Mode::baseline;
    case RunKind::elision: return bench::Mode::elision;
    default: return bench::Mode::parallel;
  }
}

RunSample run_in_process(const bench::BenchmarkInfo& info, const bench::Params& params,
                         RunKind kind, std::size_t p, const RunOptions& options) {
  RunSample s;
  s.benchmark_id = info.id;
  s.params = params;
  s.kind = kind;
  s.p = p;
  s.target_p = options.target_p;

  auto workload = info.make(params, options.target_p.value_or(p));
  workload->reset();

  if (kind == RunKind::baseline || kind == RunKind::elision) {
    const Nanos start = now();
    workload->run(mode_for(kind));
    s.wall_time = now() - start;
    s.per_worker_idle = {0};
  } else {
    rt::RuntimeOptions ro;
    ro.allow_oversubscription = options.allow_oversubscription;
    ro.instrument_idle = options.instrument_idle;
    const rt::RunStats stats = rt::launch(p, [&] { workload->run(bench::Mode::parallel); }, ro);
    s.wall_time = stats.wall_time;
    s.idle_time = stats.idle_total;
    for (const auto& w : stats.per_worker) s.per_worker_idle.push_back(w.idle_total);
    s.steals = stats.total_steals;
    s.idle_phases = stats.total_idle_phases;
  }
  s.result_digest = workload->result_digest();
  s.host = HostInfo::current();
  s.timestamp = utc_timestamp();
  return s;
}

std::string trim(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  return text;
}

RunSample run_isolated(const bench::BenchmarkInfo& info, const bench::Params& params,
                       RunKind kind, std::size_t p, const RunOptions& options) {
  if (options.child_executable.empty()) {
    throw ConfigError("isolated runs need the path of the facspeed executable");
  }
  std::vector<std::string> argv{options.child_executable, "run-one", "--bench", info.id, "--kind",
                                std::string(to_string(kind)), "--procs", std::to_string(p)};
  if (options.target_p) {
    argv.push_back("--target-procs");
    argv.push_back(std::to_string(*options.target_p));
  }
  if (options.allow_oversubscription) argv.push_back("--oversubscribe");
  for (const auto& [k, v] : params) {
    argv.push_back("--param");
    argv.push_back(k + "=" + v);
  }

  auto failed = [&](std::string why) {
    RunSample s;
    s.benchmark_id = info.id;
    s.params = params;
    s.kind = kind;
    s.p = p;
    s.target_p = options.target_p;
    s.failed = true;
    s.diagnostics = std::move(why);
    s.host = HostInfo::current();
    s.timestamp = utc_timestamp();
    return s;
  };

  detail::ProcessResult result;
  try {
    result = detail::run_process(argv);
  } catch (const std::exception& e) {
    return failed(e.what());
  }
  if (result.exit_code != 0) {
    std::string why = result.signal != 0 ? "child killed by signal " + std::to_string(result.signal)
                                         : "child exited with status " + std::to_string(result.exit_code);
    if (!result.err.empty()) why += ": " + trim(result.err);
    return failed(std::move(why));
  }
  try {
    return sample_from_json(result.out);
  } catch (const std::exception& e) {
    return failed(std::string("unparseable child output: ") + e.what());
  }
}

struct Cell {
  RunKind kind;
  std::size_t p;
  std::optional<std::size_t> target_p;
};

std::vector<Cell> plan_cells(const ExperimentPlan& plan, const bench::BenchmarkInfo& info) {
  std::vector<Cell> cells;
  cells.push_back({RunKind::baseline, 1, std::nullopt});
  // An elision of a P-dependent parameter set has no single T_elision.
  if (info.has_elision && !plan.adaptive_t1) cells.push_back({RunKind::elision, 1, std::nullopt});
  if (plan.adaptive_t1) {
    for (std::size_t p : plan.procs) cells.push_back({RunKind::one_core, 1, p});
  } else {
    cells.push_back({RunKind::one_core, 1, std::nullopt});
  }
  for (std::size_t p : plan.procs) cells.push_back({RunKind::parallel, p, std::nullopt});
  return cells;
}

double seconds_mean(const std::vector<const RunSample*>& samples) {
  double sum = 0;
  for (const auto* s : samples) sum += to_seconds(s->wall_time);
  return sum / static_cast<double>(samples.size());
}

}  // namespace

std::string_view to_string(RunKind kind) noexcept {
  switch (kind) {
    case RunKind::baseline: return "baseline";
    case RunKind::elision: return "elision";
    case RunKind::one_core: return "one_core";
    case RunKind::parallel: return "parallel";
  }
  return "?";
}

RunKind parse_kind(std::string_view text) {
  if (text == "baseline") return RunKind::baseline;
  if (text == "elision") return RunKind::elision;
  if (text == "one_core") return RunKind::one_core;
  if (text == "parallel") return RunKind::parallel;
  throw ConfigError("unknown run kind '" + std::string(text) + "'");
}

HostInfo HostInfo::current() {
  static const HostInfo info = [] {
    HostInfo h;
    char name[256] = {};
    if (gethostname(name, sizeof(name) - 1) == 0) h.hostname = name;
    utsname u{};
    if (uname(&u) == 0) h.os = std::string(u.sysname) + " " + u.release;
    h.physical_cores = rt::physical_cores();
    h.logical_cpus = std::thread::hardware_concurrency();
    return h;
  }();
  return info;
}

void RunSample::validate() const {
  auto fail = [&](const std::string& what) {
    throw InconsistentSample(std::string(to_string(kind)) + " sample: " + what);
  };
  if (p == 0) fail("p must be >= 1");
  if (wall_time < 0 || idle_time < 0) fail("negative time");
  if (kind != RunKind::parallel && p != 1) fail("p must be 1, got " + std::to_string(p));
  if ((kind == RunKind::baseline || kind == RunKind::elision) && idle_time != 0) {
    fail("idle_time must be 0");
  }
  if (target_p && kind != RunKind::one_core) fail("target_p only applies to one_core runs");
  if (failed) return;
  if (idle_time > static_cast<Nanos>(p) * wall_time) {
    fail("idle_time " + std::to_string(to_seconds(idle_time)) + " s exceeds p*wall_time " +
         std::to_string(to_seconds(static_cast<Nanos>(p) * wall_time)) + " s");
  }
  if (!per_worker_idle.empty()) {
    if (per_worker_idle.size() != p) fail("per_worker_idle has the wrong length");
    Nanos sum = 0;
    for (Nanos w : per_worker_idle) {
      if (w < 0 || w > wall_time) fail("per-worker idle outside [0, wall_time]");
      sum += w;
    }
    if (sum != idle_time) fail("idle_time differs from the per-worker sum");
  }
  if (idle_phases > (p - 1) + steals) fail("idle phases exceed (p-1) + steals");
}

void ExperimentPlan::validate(std::size_t max_procs) const {
  (void)bench::find_benchmark(benchmark_id);
  if (procs.empty()) throw ConfigError("plan: procs must not be empty");
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (procs[i] == 0) throw ConfigError("plan: P values must be >= 1");
    if (i > 0 && procs[i] <= procs[i - 1]) throw ConfigError("plan: procs must be strictly increasing");
  }
  if (procs.back() > max_procs) {
    throw ConfigError("plan: P=" + std::to_string(procs.back()) + " exceeds the " +
                      std::to_string(max_procs) + " available cores");
  }
  if (reps == 0) throw ConfigError("plan: reps must be >= 1");
  const auto& info = bench::find_benchmark(benchmark_id);
  const auto normalized = bench::normalize_params(info, params);
  if (info.depends_on_p(normalized) && !adaptive_t1) {
    throw ConfigError("plan: parameters depend on P; set adaptive_t1 to take a 1-core run per P");
  }
}

RunSample run_single(std::string_view benchmark_id, const bench::Params& params, RunKind kind,
                     std::size_t p, const RunOptions& options) {
  const auto& info = bench::find_benchmark(benchmark_id);
  if (kind == RunKind::elision && !info.has_elision) {
    throw ConfigError(info.id + " has no sequential elision");
  }
  if (kind != RunKind::parallel && p != 1) {
    throw ConfigError(std::string(to_string(kind)) + " runs use exactly one core");
  }
  const auto normalized = bench::normalize_params(info, params);
  RunSample s = options.isolate ? run_isolated(info, normalized, kind, p, options)
                                : run_in_process(info, normalized, kind, p, options);
  s.validate();
  return s;
}

std::optional<measures::MeasureSummary> summarize(const ExperimentPlan& plan,
                                                  const std::vector<RunSample>& samples,
                                                  std::vector<Hole>* holes) {
  std::map<std::tuple<RunKind, std::size_t, std::size_t>, std::vector<const RunSample*>> by_cell;
  for (const auto& s : samples) {
    if (s.failed) continue;
    by_cell[{s.kind, s.p, s.target_p.value_or(0)}].push_back(&s);
  }
  std::vector<Hole> missing;
  auto take = [&](RunKind kind, std::size_t p, std::optional<std::size_t> target)
      -> const std::vector<const RunSample*>* {
    auto it = by_cell.find({kind, p, target.value_or(0)});
    if (it == by_cell.end() || it->second.empty()) {
      missing.push_back({kind, p, target, "no successful samples"});
      return nullptr;
    }
    return &it->second;
  };

  measures::MeasureSummary summary;
  bool complete_core = true;
  if (const auto* base = take(RunKind::baseline, 1, std::nullopt)) {
    summary.baseline_time = seconds_mean(*base);
  } else {
    complete_core = false;
  }

  const auto& info = bench::find_benchmark(plan.benchmark_id);
  if (info.has_elision && !plan.adaptive_t1) {
    if (const auto* el = take(RunKind::elision, 1, std::nullopt)) summary.elision_time = seconds_mean(*el);
  }

  summary.adaptive = plan.adaptive_t1;
  std::vector<std::size_t> usable;
  if (plan.adaptive_t1) {
    for (std::size_t p : plan.procs) {
      if (const auto* one = take(RunKind::one_core, 1, p)) {
        summary.one_core_by_p[p] = seconds_mean(*one);
        usable.push_back(p);
      }
    }
  } else if (const auto* one = take(RunKind::one_core, 1, std::nullopt)) {
    summary.one_core_time = seconds_mean(*one);
    usable = plan.procs;
  } else {
    complete_core = false;
  }

  for (std::size_t p : usable) {
    const auto* par = take(RunKind::parallel, p, std::nullopt);
    if (par == nullptr) continue;
    std::vector<measures::TimingSample> timing;
    for (const auto* s : *par) timing.push_back({s->p, to_seconds(s->wall_time), to_seconds(s->idle_time)});
    const auto agg = measures::aggregate(timing);
    summary.per_p[p] = {agg.t_p, agg.i_p, agg.count};
  }
  if (holes != nullptr) *holes = missing;
  if (!complete_core || summary.per_p.empty()) return std::nullopt;
  summary.validate();
  return summary;
}

ResultSet run_experiment(const ExperimentPlan& plan, const HarnessOptions& options) {
  const std::size_t max_procs =
      options.allow_oversubscription ? std::numeric_limits<std::size_t>::max() : rt::physical_cores();
  plan.validate(max_procs);
  const auto& info = bench::find_benchmark(plan.benchmark_id);
  const auto params = bench::normalize_params(info, plan.params);

  ResultSet set;
  set.plan = plan;
  set.isolated = plan.isolate;

  for (const Cell& cell : plan_cells(plan, info)) {
    RunOptions ro;
    ro.isolate = plan.isolate;
    ro.child_executable = options.child_executable;
    ro.target_p = cell.target_p;
    ro.allow_oversubscription = options.allow_oversubscription;

    for (std::size_t w = 0; w < plan.warmup_runs; ++w) {
      (void)run_single(info.id, params, cell.kind, cell.p, ro);
    }
    for (std::size_t rep = 0; rep < plan.reps; ++rep) {
      RunSample s = run_single(info.id, params, cell.kind, cell.p, ro);
      if (s.failed) ++set.failures;
      if (options.on_sample) options.on_sample(s);
      set.samples.push_back(std::move(s));
    }
  }
  set.summary = summarize(plan, set.samples, &set.holes);
  if (!plan.output_path.empty()) save_results(set, plan.output_path);
  return set;
}

}  // namespace facspeed::harness
