#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "facspeed/report.hpp"

namespace facspeed::report {
namespace {

struct CurveStyle {
  const char* name;
  const char* label;
  const char* stroke;
  double width;
  const char* dash;  // nullptr: solid
  enum Marker { none, cross, dot } marker;
};

constexpr CurveStyle kStyles[] = {
    {"linear", "linear", "#888888", 1.0, nullptr, CurveStyle::none},
    {"elision_bound", "elision bound", "#7b3fa0", 1.5, "2,3", CurveStyle::none},
    {"maximal", "maximal", "#000000", 2.0, nullptr, CurveStyle::none},
    {"idle_specific", "idle-time specific", "#1f5fa8", 1.5, nullptr, CurveStyle::cross},
    {"inflation_specific", "inflation specific", "#c0392b", 1.5, "6,4", CurveStyle::none},
    {"actual", "actual", "#1e7b34", 2.0, nullptr, CurveStyle::dot},
};

std::optional<double> value_of(const measures::CurvePoint& pt, std::string_view name) {
  if (name == "linear") return pt.linear;
  if (name == "maximal") return pt.maximal;
  if (name == "idle_specific") return pt.idle_specific;
  if (name == "inflation_specific") return pt.inflation_specific;
  if (name == "actual") return pt.actual;
  if (name == "elision_bound") return pt.elision_bound;
  return std::nullopt;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_ceiling(double v) {
  if (!(v > 0)) return 1;
  const double magnitude = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (step * magnitude >= v - 1e-12 * v) return step * magnitude;
  }
  return 10 * magnitude;
}

double tick_step(double range) {
  const double raw = range / 8;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double step : {1.0, 2.0, 5.0, 10.0}) {
    if (step * magnitude >= raw) return step * magnitude;
  }
  return 10 * magnitude;
}

bool drawn(const PlotSpec& spec, const CurveStyle& style) {
  if (std::string_view(style.name) == "elision_bound") {
    return spec.show_elision && spec.curves.has_elision();
  }
  return true;
}

std::string format_tick(double v) {
  char buf[32];
  if (v == std::floor(v)) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%g", v);
  }
  return buf;
}

}  // namespace

PlotFrame PlotFrame::fit(const PlotSpec& spec) {
  PlotFrame f;
  f.left = 60;
  f.top = 40;
  f.right = spec.width - 90.0;
  f.bottom = spec.height - 50.0;
  double max_p = 1;
  double max_y = 0;
  for (const auto& pt : spec.curves.points) {
    max_p = std::max(max_p, static_cast<double>(pt.p));
    for (const auto& style : kStyles) {
      if (!drawn(spec, style)) continue;
      if (auto v = value_of(pt, style.name); v && std::isfinite(*v)) max_y = std::max(max_y, *v);
    }
  }
  f.x_max = max_p;
  f.y_max = nice_ceiling(max_y);
  return f;
}

std::string emit_svg(const PlotSpec& spec) {
  const PlotFrame f = PlotFrame::fit(spec);
  const auto& points = spec.curves.points;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  out += "  <title>" + escape(spec.title) + "</title>\n";
  out += "  <defs>\n"
         "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
         "markerHeight=\"6\" orient=\"auto-start-reverse\">\n"
         "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#444444\"/>\n"
         "    </marker>\n"
         "  </defs>\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";
  out += "  <text x=\"" + num((f.left + f.right) / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(spec.title) + "</text>\n";

  // Axes, ticks and grid.
  out += "  <g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\" font-family=\"sans-serif\" "
         "font-size=\"11\">\n";
  out += "    <line x1=\"" + num(f.left) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(f.right) +
         "\" y2=\"" + num(f.bottom) + "\"/>\n";
  out += "    <line x1=\"" + num(f.left) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(f.left) +
         "\" y2=\"" + num(f.top) + "\"/>\n";
  const double xs = tick_step(f.x_max);
  for (double t = 0; t <= f.x_max + 1e-9; t += xs) {
    out += "    <line x1=\"" + num(f.x(t)) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(f.x(t)) +
           "\" y2=\"" + num(f.bottom + 5) + "\"/>\n";
    out += "    <text x=\"" + num(f.x(t)) + "\" y=\"" + num(f.bottom + 18) +
           "\" text-anchor=\"middle\" stroke=\"none\">" + format_tick(t) + "</text>\n";
  }
  const double ys = tick_step(f.y_max);
  for (double t = 0; t <= f.y_max + 1e-9; t += ys) {
    out += "    <line x1=\"" + num(f.left - 5) + "\" y1=\"" + num(f.y(t)) + "\" x2=\"" + num(f.left) +
           "\" y2=\"" + num(f.y(t)) + "\"/>\n";
    out += "    <text x=\"" + num(f.left - 8) + "\" y=\"" + num(f.y(t) + 4) +
           "\" text-anchor=\"end\" stroke=\"none\">" + format_tick(t) + "</text>\n";
  }
  out += "    <text x=\"" + num((f.left + f.right) / 2) + "\" y=\"" + num(f.bottom + 38) +
         "\" text-anchor=\"middle\" stroke=\"none\">processors (P)</text>\n";
  out += "    <text x=\"16\" y=\"" + num((f.top + f.bottom) / 2) + "\" text-anchor=\"middle\" "
         "stroke=\"none\" transform=\"rotate(-90 16 " + num((f.top + f.bottom) / 2) +
         ")\">speedup</text>\n";
  out += "  </g>\n";

  // Curves.
  for (const auto& style : kStyles) {
    if (!drawn(spec, style)) continue;
    std::vector<std::pair<double, double>> xy;
    for (const auto& pt : points) {
      auto v = value_of(pt, style.name);
      if (!v || !std::isfinite(*v)) continue;
      xy.emplace_back(f.x(static_cast<double>(pt.p)), f.y(*v));
    }
    std::string stroke_attrs = "stroke=\"" + std::string(style.stroke) + "\" stroke-width=\"" +
                               num(style.width) + "\"";
    if (style.dash != nullptr) stroke_attrs += " stroke-dasharray=\"" + std::string(style.dash) + "\"";

    out += "  <g id=\"series-" + std::string(style.name) + "\">\n";
    if (xy.size() >= 2) {
      out += "    <polyline id=\"curve-" + std::string(style.name) + "\" fill=\"none\" " +
             stroke_attrs + " points=\"";
      for (std::size_t i = 0; i < xy.size(); ++i) {
        if (i > 0) out += ' ';
        out += num(xy[i].first) + "," + num(xy[i].second);
      }
      out += "\"/>\n";
    }
    const bool lone = xy.size() < 2;
    for (const auto& [x, y] : xy) {
      if (style.marker == CurveStyle::cross) {
        out += "    <path d=\"M " + num(x - 4) + " " + num(y - 4) + " L " + num(x + 4) + " " +
               num(y + 4) + " M " + num(x - 4) + " " + num(y + 4) + " L " + num(x + 4) + " " +
               num(y - 4) + "\" stroke=\"" + style.stroke + "\" stroke-width=\"1.5\"/>\n";
      } else if (style.marker == CurveStyle::dot || lone) {
        out += "    <circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" +
               style.stroke + "\"/>\n";
      }
    }
    out += "  </g>\n";
  }

  // Gap arrows at the largest P.
  if (spec.annotate_gaps && !points.empty()) {
    const auto& last = points.back();
    struct Arrow {
      const char* label;
      double from;
      double to;
    };
    const Arrow arrows[] = {
        {"A", last.linear, last.maximal},
        {"B", last.maximal, last.idle_specific},
        {"C", last.maximal, last.inflation_specific},
        {"D", last.maximal, last.actual},
    };
    out += "  <g id=\"gaps\" stroke=\"#444444\" stroke-width=\"1\" font-family=\"sans-serif\" "
           "font-size=\"12\">\n";
    double x = f.x(static_cast<double>(last.p)) + 14;
    for (const auto& a : arrows) {
      if (!std::isfinite(a.from) || !std::isfinite(a.to)) continue;
      out += "    <line id=\"gap-" + std::string(a.label) + "\" x1=\"" + num(x) + "\" y1=\"" +
             num(f.y(a.from)) + "\" x2=\"" + num(x) + "\" y2=\"" + num(f.y(a.to)) +
             "\" marker-end=\"url(#arrow)\"/>\n";
      out += "    <text x=\"" + num(x + 3) + "\" y=\"" + num((f.y(a.from) + f.y(a.to)) / 2 + 4) +
             "\" stroke=\"none\">" + a.label + "</text>\n";
      x += 16;
    }
    out += "  </g>\n";
  }

  // Legend.
  out += "  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double ly = f.top + 12;
  const double lx = f.left + 12;
  for (const auto& style : kStyles) {
    if (!drawn(spec, style)) continue;
    out += "    <line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + style.stroke + "\" stroke-width=\"" +
           num(style.width) + "\"" +
           (style.dash != nullptr ? " stroke-dasharray=\"" + std::string(style.dash) + "\"" : "") +
           "/>\n";
    out += "    <text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + style.label +
           "</text>\n";
    ly += 16;
  }
  out += "  </g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace facspeed::report
