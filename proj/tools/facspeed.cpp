// facspeed: run experiment plans, plot factored speedups, diagnose scaling.
//
// Exit codes: 0 success, 2 plan/config error, 3 partial failure, 1 other error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facspeed/harness.hpp"
#include "facspeed/registry.hpp"
#include "facspeed/report.hpp"
#include "facspeed/runtime.hpp"

namespace {

using namespace facspeed;

constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

std::string self_executable() {
  std::error_code ec;
  auto path = std::filesystem::read_symlink("/proc/self/exe", ec);
  return ec ? std::string() : path.string();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

int cmd_run(const std::string& plan_path, const std::string& out_path, bool oversubscribe) {
  harness::ExperimentPlan plan = harness::load_plan(plan_path);
  if (!out_path.empty()) plan.output_path = out_path;
  if (plan.output_path.empty()) throw ConfigError("no output path: pass --out or set output_path");

  harness::HarnessOptions options;
  options.child_executable = self_executable();
  options.allow_oversubscription = oversubscribe;
  options.on_sample = [](const harness::RunSample& s) {
    if (s.failed) {
      std::fprintf(stderr, "%-9s P=%-3zu FAILED: %s\n", std::string(harness::to_string(s.kind)).c_str(),
                   s.p, s.diagnostics.c_str());
    } else {
      std::fprintf(stderr, "%-9s P=%-3zu wall %.6f s  idle %.6f s\n",
                   std::string(harness::to_string(s.kind)).c_str(), s.p, to_seconds(s.wall_time),
                   to_seconds(s.idle_time));
    }
  };
  const harness::ResultSet set = harness::run_experiment(plan, options);
  std::fprintf(stderr, "wrote %s (%zu samples, %zu failed)\n", plan.output_path.c_str(),
               set.samples.size(), set.failures);
  if (set.failures > 0 || !set.holes.empty() || !set.summary) return kExitPartial;
  return 0;
}

int cmd_run_one(const std::string& bench_id, const std::string& kind, std::optional<std::size_t> procs,
                std::optional<std::size_t> target_procs, const std::vector<std::string>& params,
                bool oversubscribe) {
  bench::Params given;
  for (const auto& kv : params) given.insert(bench::parse_param(kv));
  const harness::RunKind run_kind = harness::parse_kind(kind);
  const std::size_t p = run_kind == harness::RunKind::parallel ? rt::resolve_worker_count(procs)
                                                               : procs.value_or(1);
  harness::RunOptions options;
  options.target_p = target_procs;
  options.allow_oversubscription = oversubscribe;
  const harness::RunSample sample = harness::run_single(bench_id, given, run_kind, p, options);
  std::cout << harness::sample_to_json(sample);
  return 0;
}

int cmd_list() {
  for (const auto& info : bench::registry()) {
    std::cout << info.id << "  " << info.description << "\n";
    for (const auto& p : info.params) {
      std::cout << "    " << p.name;
      if (!p.default_value.empty()) std::cout << " (default " << p.default_value << ")";
      std::cout << ": " << p.help << "\n";
    }
  }
  return 0;
}

std::optional<measures::CurveSet> curves_from(const std::string& in_path) {
  const harness::ResultSet set = harness::load_results(in_path);
  if (!set.summary) {
    std::cerr << in_path << ": results have no summary (missing baseline or one-core runs)\n";
    return std::nullopt;
  }
  return measures::speedup_curves(*set.summary);
}

int cmd_plot(const std::string& in_path, const std::string& out_path, bool elision, bool annotate,
             const std::string& title) {
  auto curves = curves_from(in_path);
  if (!curves) return kExitPartial;
  if (ends_with(out_path, ".csv")) {
    write_file(out_path, report::emit_csv(*curves));
  } else if (ends_with(out_path, ".svg")) {
    report::PlotSpec spec;
    spec.title = title.empty() ? harness::load_results(in_path).plan.benchmark_id : title;
    spec.curves = *curves;
    spec.show_elision = elision;
    spec.annotate_gaps = annotate;
    write_file(out_path, report::emit_svg(spec));
  } else {
    throw ConfigError("--out must end in .svg or .csv");
  }
  return 0;
}

int cmd_diagnose(const std::string& in_path, bool as_json) {
  auto curves = curves_from(in_path);
  if (!curves) return kExitPartial;
  const report::Diagnostics d = report::diagnose(*curves);
  std::cout << (as_json ? report::diagnostics_to_json(d) : report::diagnostics_to_text(d));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factored speedup measurement and diagnosis"};
  app.require_subcommand(1);

  std::string plan_path, out_path, in_path, bench_id, kind, title;
  std::optional<std::size_t> procs, target_procs;
  std::vector<std::string> params;
  bool oversubscribe = false, elision = false, annotate = false, as_json = false;

  auto* run = app.add_subcommand("run", "run an experiment plan and save the results");
  run->add_option("--plan", plan_path, "plan file (JSON)")->required();
  run->add_option("--out", out_path, "results file (JSON)");
  run->add_flag("--oversubscribe", oversubscribe, "allow more workers than physical cores");

  auto* run_one = app.add_subcommand("run-one", "run one sample and print it as JSON");
  run_one->add_option("--bench", bench_id, "benchmark id")->required();
  run_one->add_option("--kind", kind, "baseline | elision | one_core | parallel")->required();
  run_one->add_option("--procs", procs, "worker count (FACSPEED_WORKERS overrides)");
  run_one->add_option("--target-procs", target_procs, "P that P-dependent parameters resolve for");
  run_one->add_option("--param", params, "benchmark parameter key=value")->take_all();
  run_one->add_flag("--oversubscribe", oversubscribe, "allow more workers than physical cores");

  auto* list = app.add_subcommand("list-benchmarks", "list registered benchmarks");

  auto* plot = app.add_subcommand("plot", "render factored speedup curves");
  plot->add_option("--in", in_path, "results file")->required();
  plot->add_option("--out", out_path, "output .svg or .csv")->required();
  plot->add_flag("--elision", elision, "draw the elision bound");
  plot->add_flag("--annotate", annotate, "draw gap arrows A-D at the largest P");
  plot->add_option("--title", title, "plot title");

  auto* diag = app.add_subcommand("diagnose", "report curvature findings");
  diag->add_option("--in", in_path, "results file")->required();
  diag->add_flag("--json", as_json, "print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(plan_path, out_path, oversubscribe);
    if (*run_one) return cmd_run_one(bench_id, kind, procs, target_procs, params, oversubscribe);
    if (*list) return cmd_list();
    if (*plot) return cmd_plot(in_path, out_path, elision, annotate, title);
    if (*diag) return cmd_diagnose(in_path, as_json);
  } catch (const ConfigError& e) {
    std::cerr << "facspeed: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "facspeed: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InconsistentSample& e) {
    std::cerr << "facspeed: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "facspeed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
