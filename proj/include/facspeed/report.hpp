#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "facspeed/measures.hpp"

namespace facspeed::report {

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "p,linear,maximal,idle_specific,inflation_specific,actual,elision_bound,work_inflation,"
    "parallel_work";

/// One row per P in the fixed column order of kCsvHeader. Numbers are written
/// in shortest round-trip form; a missing elision bound is an empty field.
std::string emit_csv(const measures::CurveSet& curves);

/// Inverse of emit_csv for the emitted columns. Throws ParseError.
measures::CurveSet parse_csv(std::string_view text);

// ---------------------------------------------------------------------------
// SVG

struct PlotSpec {
  std::string title;
  measures::CurveSet curves;
  bool show_elision = false;
  bool annotate_gaps = false;
  int width = 640;
  int height = 480;
};

/// Maps data coordinates to SVG pixels. Exposed so tests can invert the
/// rendered polylines.
struct PlotFrame {
  double left = 0, top = 0, right = 0, bottom = 0;
  double x_max = 1;  // x axis spans [0, x_max] in P
  double y_max = 1;  // y axis spans [0, y_max] in speedup

  static PlotFrame fit(const PlotSpec& spec);
  double x(double p) const noexcept { return left + (right - left) * p / x_max; }
  double y(double speedup) const noexcept { return bottom - (bottom - top) * speedup / y_max; }
};

/// Standalone SVG document of the factored speedup plot. Each curve is a
/// <polyline> with id "curve-<name>"; the same output for the same input.
std::string emit_svg(const PlotSpec& spec);

// ---------------------------------------------------------------------------
// Curvature diagnostics

enum class FindingCode {
  overhead_growth,
  parallelism_starved,
  inflation_saturated,
  slowdown,
  sched_overhead,
  healthy,
};

std::string_view to_string(FindingCode code) noexcept;

struct CurveEvidence {
  std::string curve;
  double first_slope = 0;  // least-squares slope over the first tercile
  double last_slope = 0;   // ... over the last tercile
  double ratio = 0;        // last / first, 0 when the first slope is not positive
};

struct Finding {
  FindingCode code = FindingCode::healthy;
  std::vector<CurveEvidence> evidence;
  std::string message;
};

struct Thresholds {
  double flatten = 0.5;        // maximal curve
  double starve = 0.25;        // idle-specific and inflation-specific curves
  double sched_fraction = 0.1; // (elision_bound - maximal) / linear at max P
};

struct Diagnostics {
  std::vector<Finding> findings;
  /// Gap magnitudes at the largest P as fractions of linear speedup.
  double gap_a_fraction = 0;
  double gap_b_fraction = 0;
  double gap_c_fraction = 0;
  double gap_d_fraction = 0;

  bool has(FindingCode code) const noexcept;
};

/// Needs at least three P values; throws ConfigError otherwise.
Diagnostics diagnose(const measures::CurveSet& curves, const Thresholds& thresholds = {});

std::string diagnostics_to_text(const Diagnostics& diagnostics);
std::string diagnostics_to_json(const Diagnostics& diagnostics);

/// Tercile slopes of one named curve ("maximal", "idle_specific", ...).
CurveEvidence curvature(const measures::CurveSet& curves, std::string_view curve);

}  // namespace facspeed::report
