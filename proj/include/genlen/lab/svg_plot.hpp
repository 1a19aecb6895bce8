#pragma once

// Static SVG scaling plot: observed length against n with min/median/max
// markers per (g, n), plus the recorded lower and generic upper bounds as
// reference curves.

#include "genlen/lab/experiment.hpp"
#include "genlen/lab/matrix_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace genlen::lab {

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

struct SeriesPoint {
  std::vector<std::size_t> observed;
  std::size_t lower = 0;
  std::size_t upper = 0;
};

}  // namespace detail

inline std::string render_plot(const std::vector<ExperimentRow>& rows, const std::string& title) {
  constexpr double W = 640, H = 420, left = 60, right = 20, top = 40, bottom = 50;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::map<std::size_t, std::map<std::size_t, detail::SeriesPoint>> series;  // g -> n -> point
  std::size_t n_min = SIZE_MAX, n_max = 0, y_max = 1;
  for (const auto& r : rows) {
    auto& pt = series[r.g][r.n];
    pt.lower = r.lower_bound;
    pt.upper = r.upper_bound_generic;
    if (r.outcome == Outcome::Value) {
      pt.observed.push_back(r.observed);
      y_max = std::max(y_max, r.observed);
    }
    y_max = std::max({y_max, r.lower_bound, r.upper_bound_generic});
    n_min = std::min(n_min, r.n);
    n_max = std::max(n_max, r.n);
  }
  if (rows.empty()) n_min = n_max = 1;
  const double xspan = (n_max > n_min) ? static_cast<double>(n_max - n_min) : 1.0;
  auto px = [&](std::size_t n) {
    if (n_max == n_min) return left + (W - left - right) / 2.0;
    return left + (W - left - right) * static_cast<double>(n - n_min) / xspan;
  };
  auto py = [&](double y) { return H - bottom - (H - top - bottom) * y / static_cast<double>(y_max + 1); };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(W) + "\" height=\"" + detail::fmt(H) +
       "\" viewBox=\"0 0 " + detail::fmt(W) + " " + detail::fmt(H) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + detail::fmt(W) + "\" height=\"" + detail::fmt(H) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + detail::fmt(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       detail::xml_escape(title) + "</text>\n";
  // axes
  s += "<line x1=\"" + detail::fmt(left) + "\" y1=\"" + detail::fmt(H - bottom) + "\" x2=\"" + detail::fmt(W - right) +
       "\" y2=\"" + detail::fmt(H - bottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + detail::fmt(left) + "\" y1=\"" + detail::fmt(top) + "\" x2=\"" + detail::fmt(left) + "\" y2=\"" +
       detail::fmt(H - bottom) + "\" stroke=\"black\"/>\n";
  for (std::size_t n = n_min; n <= n_max && !rows.empty(); ++n) {
    s += "<text x=\"" + detail::fmt(px(n)) + "\" y=\"" + detail::fmt(H - bottom + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(n) + "</text>\n";
  }
  const std::size_t ystep = std::max<std::size_t>(1, (y_max + 1) / 8);
  for (std::size_t y = 0; y <= y_max + 1; y += ystep) {
    s += "<text x=\"" + detail::fmt(left - 8) + "\" y=\"" + detail::fmt(py(static_cast<double>(y)) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(y) + "</text>\n";
  }
  s += "<text x=\"" + detail::fmt(W / 2) + "\" y=\"" + detail::fmt(H - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n</text>\n";
  s += "<text x=\"16\" y=\"" + detail::fmt(H / 2) + "\" transform=\"rotate(-90 16 " + detail::fmt(H / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">length</text>\n";

  std::size_t ci = 0;
  for (const auto& [g, pts] : series) {
    const std::string color = palette[ci++ % 6];
    std::string lower, upper;
    for (const auto& [n, pt] : pts) {
      lower += detail::fmt(px(n)) + "," + detail::fmt(py(static_cast<double>(pt.lower))) + " ";
      upper += detail::fmt(px(n)) + "," + detail::fmt(py(static_cast<double>(pt.upper))) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-dasharray=\"4 3\" points=\"" + lower + "\"/>\n";
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-dasharray=\"1 3\" points=\"" + upper + "\"/>\n";
    std::string median_line;
    for (const auto& [n, pt] : pts) {
      if (pt.observed.empty()) continue;
      std::vector<std::size_t> v = pt.observed;
      std::sort(v.begin(), v.end());
      const double med = (v.size() % 2) ? static_cast<double>(v[v.size() / 2])
                                        : 0.5 * static_cast<double>(v[v.size() / 2 - 1] + v[v.size() / 2]);
      const double x = px(n);
      s += "<line x1=\"" + detail::fmt(x) + "\" y1=\"" + detail::fmt(py(static_cast<double>(v.front()))) + "\" x2=\"" +
           detail::fmt(x) + "\" y2=\"" + detail::fmt(py(static_cast<double>(v.back()))) + "\" stroke=\"" + color +
           "\"/>\n";
      for (double y : {static_cast<double>(v.front()), static_cast<double>(v.back())}) {
        s += "<line x1=\"" + detail::fmt(x - 4) + "\" y1=\"" + detail::fmt(py(y)) + "\" x2=\"" + detail::fmt(x + 4) +
             "\" y2=\"" + detail::fmt(py(y)) + "\" stroke=\"" + color + "\"/>\n";
      }
      s += "<circle cx=\"" + detail::fmt(x) + "\" cy=\"" + detail::fmt(py(med)) + "\" r=\"3.5\" fill=\"" + color +
           "\"/>\n";
      median_line += detail::fmt(x) + "," + detail::fmt(py(med)) + " ";
    }
    if (!median_line.empty()) {
      s += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + median_line + "\"/>\n";
    }
    const double ly = top + 14.0 * static_cast<double>(ci);
    s += "<text x=\"" + detail::fmt(W - right - 4) + "\" y=\"" + detail::fmt(ly) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">g = " +
         std::to_string(g) + " (solid: median, dashed: lower, dotted: upper)</text>\n";
  }
  s += "</svg>\n";
  return s;
}

inline void emit_plot(const std::vector<ExperimentRow>& rows, const std::string& path,
                      const std::string& title = "observed length vs n") {
  write_file(path, render_plot(rows, title));
}

}  // namespace genlen::lab
