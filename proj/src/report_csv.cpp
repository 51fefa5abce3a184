#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "facspeed/report.hpp"

namespace facspeed::report {
namespace {

void put(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double number(std::string_view field, std::size_t line, const char* column) {
  double v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ", column " + column + ": '" +
                     std::string(field) + "' is not a number");
  }
  return v;
}

}  // namespace

std::string emit_csv(const measures::CurveSet& curves) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& pt : curves.points) {
    out += std::to_string(pt.p);
    for (double v : {pt.linear, pt.maximal, pt.idle_specific, pt.inflation_specific, pt.actual}) {
      out += ',';
      put(out, v);
    }
    out += ',';
    if (pt.elision_bound) put(out, *pt.elision_bound);
    out += ',';
    put(out, pt.work_inflation);
    out += ',';
    put(out, pt.parallel_work);
    out += '\n';
  }
  return out;
}

measures::CurveSet parse_csv(std::string_view text) {
  measures::CurveSet set;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError("line 1: unexpected header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 9 fields, got " +
                       std::to_string(f.size()));
    }
    measures::CurvePoint pt;
    const double p = number(f[0], line_no, "p");
    if (!(p >= 1) || p != std::floor(p)) {
      throw ParseError("line " + std::to_string(line_no) + ", column p: not a positive integer");
    }
    pt.p = static_cast<std::size_t>(p);
    pt.linear = number(f[1], line_no, "linear");
    pt.maximal = number(f[2], line_no, "maximal");
    pt.idle_specific = number(f[3], line_no, "idle_specific");
    pt.inflation_specific = number(f[4], line_no, "inflation_specific");
    pt.unbounded_inflation_specific = std::isinf(pt.inflation_specific);
    pt.actual = number(f[5], line_no, "actual");
    if (!f[6].empty()) pt.elision_bound = number(f[6], line_no, "elision_bound");
    pt.work_inflation = number(f[7], line_no, "work_inflation");
    pt.parallel_work = number(f[8], line_no, "parallel_work");
    if (!set.points.empty() && pt.p <= set.points.back().p) {
      throw ParseError("line " + std::to_string(line_no) + ": p values must be strictly increasing");
    }
    set.points.push_back(pt);
  }
  if (!header_seen) throw ParseError("empty CSV document");
  return set;
}

}  // namespace facspeed::report
