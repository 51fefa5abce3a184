#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "facspeed/report.hpp"

namespace facspeed::report {
namespace {

double value(const measures::CurvePoint& pt, std::string_view curve) {
  if (curve == "linear") return pt.linear;
  if (curve == "maximal") return pt.maximal;
  if (curve == "idle_specific") return pt.idle_specific;
  if (curve == "inflation_specific") return pt.inflation_specific;
  if (curve == "actual") return pt.actual;
  if (curve == "elision_bound" && pt.elision_bound) return *pt.elision_bound;
  throw ConfigError("unknown curve '" + std::string(curve) + "'");
}

// Least-squares slope of value against P over points[begin, end); non-finite
// values are skipped.
double slope(const std::vector<measures::CurvePoint>& points, std::size_t begin, std::size_t end,
             std::string_view curve) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const double y = value(points[i], curve);
    if (!std::isfinite(y)) continue;
    const double x = static_cast<double>(points[i].p);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0) return 0;
  return (n * sxy - sx * sy) / denom;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string_view to_string(FindingCode code) noexcept {
  switch (code) {
    case FindingCode::overhead_growth: return "overhead_growth";
    case FindingCode::parallelism_starved: return "parallelism_starved";
    case FindingCode::inflation_saturated: return "inflation_saturated";
    case FindingCode::slowdown: return "slowdown";
    case FindingCode::sched_overhead: return "sched_overhead";
    case FindingCode::healthy: return "healthy";
  }
  return "?";
}

bool Diagnostics::has(FindingCode code) const noexcept {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; });
}

CurveEvidence curvature(const measures::CurveSet& curves, std::string_view curve) {
  const auto& pts = curves.points;
  const std::size_t n = pts.size();
  if (n < 3) throw ConfigError("curvature needs at least 3 P values, got " + std::to_string(n));
  const std::size_t t = std::max<std::size_t>(2, (n + 2) / 3);
  CurveEvidence e;
  e.curve = std::string(curve);
  e.first_slope = slope(pts, 0, t, curve);
  e.last_slope = slope(pts, n - t, n, curve);
  e.ratio = e.first_slope > 1e-12 ? e.last_slope / e.first_slope : 0.0;
  return e;
}

Diagnostics diagnose(const measures::CurveSet& curves, const Thresholds& th) {
  const auto& pts = curves.points;
  if (pts.size() < 3) {
    throw ConfigError("diagnose needs at least 3 P values, got " + std::to_string(pts.size()));
  }
  Diagnostics d;
  const auto& last = pts.back();
  d.gap_a_fraction = (last.linear - last.maximal) / last.linear;
  d.gap_b_fraction = (last.maximal - last.idle_specific) / last.linear;
  d.gap_c_fraction = (last.maximal - last.inflation_specific) / last.linear;
  d.gap_d_fraction = (last.maximal - last.actual) / last.linear;

  const CurveEvidence maximal = curvature(curves, "maximal");
  const CurveEvidence idle = curvature(curves, "idle_specific");
  const CurveEvidence inflation = curvature(curves, "inflation_specific");

  if (maximal.ratio < th.flatten) {
    d.findings.push_back({FindingCode::overhead_growth, {maximal},
                          "maximal speedup flattens (tercile slope ratio " + fixed(maximal.ratio) +
                              "): overheads grow with the number of cores"});
  }
  const bool maximal_straight = maximal.ratio >= th.flatten;
  if (maximal_straight && idle.ratio < th.starve) {
    d.findings.push_back({FindingCode::parallelism_starved, {maximal, idle},
                          "idle-time-specific speedup flattens (ratio " + fixed(idle.ratio) +
                              ") while maximal stays straight: extra cores mostly wait for work; "
                              "the program lacks parallelism"});
  }
  const bool slowing = inflation.last_slope < 0;
  if (maximal_straight && inflation.ratio < th.starve && !slowing) {
    d.findings.push_back({FindingCode::inflation_saturated, {maximal, inflation},
                          "inflation-specific speedup flattens (ratio " + fixed(inflation.ratio) +
                              "): extra core time turns into work inflation, typical of a "
                              "memory bandwidth bottleneck"});
  }
  if (slowing) {
    d.findings.push_back({FindingCode::slowdown, {inflation},
                          "inflation-specific speedup slopes downwards (last-tercile slope " +
                              fixed(inflation.last_slope) +
                              "): adding cores slows the computation down, suggesting contention"});
  }
  if (curves.has_elision() && last.elision_bound) {
    const double fraction = (*last.elision_bound - last.maximal) / last.linear;
    if (fraction > th.sched_fraction) {
      d.findings.push_back({FindingCode::sched_overhead, {},
                            "elision bound exceeds maximal speedup by " + fixed(100 * fraction) +
                                "% of linear at P=" + std::to_string(last.p) +
                                ": one-core scheduling work is significant"});
    }
  }
  if (d.findings.empty()) {
    d.findings.push_back({FindingCode::healthy, {maximal, idle, inflation},
                          "no curvature problem detected"});
  }
  return d;
}

std::string diagnostics_to_text(const Diagnostics& d) {
  std::string out;
  for (const auto& f : d.findings) {
    out += std::string(to_string(f.code)) + ": " + f.message + "\n";
  }
  out += "gaps at max P (fraction of linear): A=" + fixed(d.gap_a_fraction) +
         " B=" + fixed(d.gap_b_fraction) + " C=" + fixed(d.gap_c_fraction) +
         " D=" + fixed(d.gap_d_fraction) + "\n";
  return out;
}

std::string diagnostics_to_json(const Diagnostics& d) {
  using json = nlohmann::ordered_json;
  json findings = json::array();
  for (const auto& f : d.findings) {
    json evidence = json::array();
    for (const auto& e : f.evidence) {
      evidence.push_back({{"curve", e.curve},
                          {"first_slope", e.first_slope},
                          {"last_slope", e.last_slope},
                          {"ratio", e.ratio}});
    }
    findings.push_back({{"code", std::string(to_string(f.code))},
                        {"message", f.message},
                        {"evidence", evidence}});
  }
  json j;
  j["findings"] = findings;
  j["gap_fractions"] = {{"A", d.gap_a_fraction},
                        {"B", d.gap_b_fraction},
                        {"C", d.gap_c_fraction},
                        {"D", d.gap_d_fraction}};
  return j.dump(2) + "\n";
}

}  // namespace facspeed::report
