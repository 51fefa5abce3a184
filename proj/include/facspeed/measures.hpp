#pragma once

// Derivation of parallel work, work inflation and the factored speedup curves
// from four wall-clock measures: the sequential baseline T_s, the P-core time
// T_P, the total idle time I_P, and the 1-core time of the parallel program T_1.
//
// Everything here is a pure function of its inputs.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "facspeed/errors.hpp"

namespace facspeed::measures {

/// Aggregated timings of one P value.
struct PerP {
  double parallel_time = 0;  // T_P, seconds
  double idle_time = 0;      // I_P, seconds
  std::size_t sample_count = 0;
};

struct MeasureSummary {
  double baseline_time = 0;                 // T_s
  double one_core_time = 0;                 // T_1 (non-adaptive)
  std::map<std::size_t, double> one_core_by_p;  // T_1^P (adaptive mode)
  bool adaptive = false;
  std::optional<double> elision_time;       // T_elision
  std::map<std::size_t, PerP> per_p;

  /// T_1 for a given P: T_1^P in adaptive mode, T_1 otherwise.
  double one_core_for(std::size_t p) const;

  /// Throws InconsistentSample when a summary invariant is violated.
  void validate() const;
};

struct CurvePoint {
  std::size_t p = 0;
  double linear = 0;
  double maximal = 0;
  double idle_specific = 0;
  double inflation_specific = 0;  // +inf when P*T_P == I_P
  double actual = 0;
  std::optional<double> elision_bound;
  double work_inflation = 0;  // F_P, seconds; negative means deflation
  double parallel_work = 0;   // W_P, seconds
  std::optional<double> sched_work_estimate;  // S_1, seconds
  // Kept so the curve set can be re-checked against its inputs.
  double idle_time = 0;
  double baseline_time = 0;
  /// P*T_P - I_P was zero: inflation_specific is unbounded.
  bool unbounded_inflation_specific = false;
};

/// Gap magnitudes in speedup units at one P.
struct Gaps {
  std::size_t p = 0;
  double a = 0;  // linear - maximal
  double b = 0;  // maximal - idle_specific
  double c = 0;  // maximal - inflation_specific
  double d = 0;  // maximal - actual
};

struct CurveSet {
  std::vector<CurvePoint> points;  // strictly increasing p

  bool has_elision() const noexcept;
  /// Recomputed from `points` on every call.
  std::vector<Gaps> gaps() const;
};

struct SchedWork {
  double seconds = 0;
  bool noisy = false;  // T_1 < T_elision; clamped to zero
};

/// W_P = P*T_P - I_P.
double parallel_work(std::size_t p, double t_p, double i_p);

/// F_P = P*T_P - I_P - T_1.
double work_inflation(std::size_t p, double t_p, double i_p, double t_1);

/// S_1 ~ T_1 - T_elision, clamped at zero.
SchedWork sched_work_estimate(double t_1, double t_elision);

/// One timed execution, reduced to what aggregation needs.
struct TimingSample {
  std::size_t p = 0;
  double wall_time = 0;
  double idle_time = 0;
};

struct Aggregate {
  double t_p = 0;
  double i_p = 0;
  std::size_t count = 0;
};

/// Arithmetic means of wall and idle time. Speedups are later formed as ratios
/// of these means, never as means of per-sample ratios.
Aggregate aggregate(std::span<const TimingSample> samples);

CurveSet speedup_curves(const MeasureSummary& summary);

}  // namespace facspeed::measures
