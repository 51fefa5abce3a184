#include "facspeed/measures.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace facspeed::measures {
namespace {

std::string fmt(double v) { return std::to_string(v); }

void check_sample(std::size_t p, double t_p, double i_p) {
  if (p == 0) throw InconsistentSample("P must be >= 1");
  if (!(t_p > 0) || !std::isfinite(t_p)) throw InconsistentSample("T_P must be > 0, got " + fmt(t_p));
  if (!(i_p >= 0) || !std::isfinite(i_p)) throw InconsistentSample("I_P must be >= 0, got " + fmt(i_p));
  if (i_p > static_cast<double>(p) * t_p) {
    throw InconsistentSample("I_P = " + fmt(i_p) + " exceeds P*T_P = " +
                             fmt(static_cast<double>(p) * t_p) + " at P=" + std::to_string(p));
  }
}

}  // namespace

double MeasureSummary::one_core_for(std::size_t p) const {
  if (!adaptive) return one_core_time;
  auto it = one_core_by_p.find(p);
  if (it == one_core_by_p.end()) {
    throw InconsistentSample("adaptive summary has no T_1^P for P=" + std::to_string(p));
  }
  return it->second;
}

void MeasureSummary::validate() const {
  if (!(baseline_time > 0)) throw InconsistentSample("T_s must be > 0");
  if (adaptive) {
    for (const auto& [p, t1] : one_core_by_p) {
      if (!(t1 > 0)) throw InconsistentSample("T_1^" + std::to_string(p) + " must be > 0");
    }
    for (const auto& [p, _] : per_p) (void)one_core_for(p);
  } else if (!(one_core_time > 0)) {
    throw InconsistentSample("T_1 must be > 0");
  }
  if (elision_time && !(*elision_time > 0)) throw InconsistentSample("T_elision must be > 0");
  for (const auto& [p, m] : per_p) check_sample(p, m.parallel_time, m.idle_time);
}

bool CurveSet::has_elision() const noexcept {
  return !points.empty() && points.front().elision_bound.has_value();
}

std::vector<Gaps> CurveSet::gaps() const {
  std::vector<Gaps> out;
  out.reserve(points.size());
  for (const auto& pt : points) {
    out.push_back({pt.p, pt.linear - pt.maximal, pt.maximal - pt.idle_specific,
                   pt.maximal - pt.inflation_specific, pt.maximal - pt.actual});
  }
  return out;
}

double parallel_work(std::size_t p, double t_p, double i_p) {
  check_sample(p, t_p, i_p);
  return static_cast<double>(p) * t_p - i_p;
}

double work_inflation(std::size_t p, double t_p, double i_p, double t_1) {
  if (!(t_1 > 0)) throw InconsistentSample("T_1 must be > 0");
  return parallel_work(p, t_p, i_p) - t_1;
}

SchedWork sched_work_estimate(double t_1, double t_elision) {
  if (!(t_1 > 0) || !(t_elision > 0)) throw InconsistentSample("T_1 and T_elision must be > 0");
  const double s = t_1 - t_elision;
  if (s < 0) return {0.0, true};
  return {s, false};
}

Aggregate aggregate(std::span<const TimingSample> samples) {
  if (samples.empty()) throw InconsistentSample("aggregate: no samples");
  const std::size_t p = samples.front().p;
  double wall = 0;
  double idle = 0;
  for (const auto& s : samples) {
    if (s.p != p) {
      throw InconsistentSample("aggregate: mixed worker counts (" + std::to_string(p) + " and " +
                               std::to_string(s.p) + ")");
    }
    wall += s.wall_time;
    idle += s.idle_time;
  }
  const auto n = static_cast<double>(samples.size());
  return {wall / n, idle / n, samples.size()};
}

CurveSet speedup_curves(const MeasureSummary& summary) {
  summary.validate();
  CurveSet set;
  set.points.reserve(summary.per_p.size());
  const double ts = summary.baseline_time;
  for (const auto& [p, m] : summary.per_p) {
    const double pd = static_cast<double>(p);
    const double t1 = summary.one_core_for(p);
    const double work = parallel_work(p, m.parallel_time, m.idle_time);

    CurvePoint pt;
    pt.p = p;
    pt.linear = pd;
    pt.maximal = pd * ts / t1;
    pt.idle_specific = pd * ts / (t1 + m.idle_time);
    if (work > 0) {
      pt.inflation_specific = pd * ts / work;
    } else {
      pt.inflation_specific = std::numeric_limits<double>::infinity();
      pt.unbounded_inflation_specific = true;
    }
    pt.actual = ts / m.parallel_time;
    pt.parallel_work = work;
    pt.work_inflation = work - t1;
    pt.idle_time = m.idle_time;
    pt.baseline_time = ts;
    if (summary.elision_time) {
      pt.elision_bound = pd * ts / *summary.elision_time;
      pt.sched_work_estimate = sched_work_estimate(t1, *summary.elision_time).seconds;
    }
    set.points.push_back(pt);
  }
  return set;
}

}  // namespace facspeed::measures
