#pragma once

// Experiment orchestration: runs the baseline, elision, one-core and P-sweep
// cells of a plan with warmups and repetitions, optionally one fresh process
// per sample, and aggregates the retained samples into a MeasureSummary.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facspeed/clock.hpp"
#include "facspeed/measures.hpp"
#include "facspeed/registry.hpp"

namespace facspeed::harness {

enum class RunKind { baseline, elision, one_core, parallel };

std::string_view to_string(RunKind kind) noexcept;
RunKind parse_kind(std::string_view text);

struct HostInfo {
  std::string hostname;
  std::string os;
  std::size_t physical_cores = 0;
  std::size_t logical_cpus = 0;

  static HostInfo current();
  bool operator==(const HostInfo&) const = default;
};

struct RunSample {
  std::string benchmark_id;
  bench::Params params;
  RunKind kind = RunKind::parallel;
  std::size_t p = 1;
  /// For one-core runs of P-dependent parameter sets: the P they stand for.
  std::optional<std::size_t> target_p;
  Nanos wall_time = 0;
  Nanos idle_time = 0;
  std::vector<Nanos> per_worker_idle;
  std::uint64_t steals = 0;
  std::uint64_t idle_phases = 0;
  std::uint64_t result_digest = 0;
  HostInfo host;
  std::string timestamp;  // ISO 8601 UTC
  bool failed = false;
  std::string diagnostics;

  /// Kind/P consistency and idle-time bounds. Throws InconsistentSample.
  void validate() const;
  bool operator==(const RunSample&) const = default;
};

struct ExperimentPlan {
  std::string benchmark_id;
  bench::Params params;
  std::vector<std::size_t> procs;
  std::size_t reps = 5;
  std::size_t warmup_runs = 1;
  bool adaptive_t1 = false;
  bool isolate = true;
  std::string output_path;

  /// Throws ConfigError. `max_procs` is the largest admissible P.
  void validate(std::size_t max_procs) const;
  bool operator==(const ExperimentPlan&) const = default;
};

/// A plan cell whose samples all failed.
struct Hole {
  RunKind kind = RunKind::parallel;
  std::size_t p = 1;
  std::optional<std::size_t> target_p;
  std::string reason;
  bool operator==(const Hole&) const = default;
};

inline constexpr std::string_view kSchemaVersion = "1.0";

struct ResultSet {
  std::string schema_version{kSchemaVersion};
  ExperimentPlan plan;
  bool isolated = false;
  std::vector<RunSample> samples;
  std::optional<measures::MeasureSummary> summary;
  std::vector<Hole> holes;
  std::size_t failures = 0;
};

struct RunOptions {
  bool isolate = false;
  /// Executable providing `run-one`; required when isolate is set.
  std::string child_executable;
  std::optional<std::size_t> target_p;
  bool allow_oversubscription = false;
  bool instrument_idle = true;
};

/// One timed execution. In-process failures throw; isolated child failures
/// come back as a sample with failed=true and the child's diagnostics.
RunSample run_single(std::string_view benchmark_id, const bench::Params& params, RunKind kind,
                     std::size_t p, const RunOptions& options = {});

struct HarnessOptions {
  std::string child_executable;
  bool allow_oversubscription = false;
  /// Called after every retained sample.
  std::function<void(const RunSample&)> on_sample;
};

/// Runs every cell of `plan`, aggregates, and saves the set to
/// plan.output_path when it is set.
ResultSet run_experiment(const ExperimentPlan& plan, const HarnessOptions& options = {});

/// Aggregates retained samples; cells without samples become holes.
std::optional<measures::MeasureSummary> summarize(const ExperimentPlan& plan,
                                                  const std::vector<RunSample>& samples,
                                                  std::vector<Hole>* holes = nullptr);

// ---------------------------------------------------------------------------
// Results file: one JSON document {schema_version, isolation, plan, samples,
// summary, holes, failures}. Times are decimal seconds.

std::string results_to_json(const ResultSet& set);
ResultSet results_from_json(std::string_view text);
void save_results(const ResultSet& set, const std::string& path);
ResultSet load_results(const std::string& path);

std::string sample_to_json(const RunSample& sample);
RunSample sample_from_json(std::string_view text);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(std::string_view text);
ExperimentPlan load_plan(const std::string& path);

}  // namespace facspeed::harness
