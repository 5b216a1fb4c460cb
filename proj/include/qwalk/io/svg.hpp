// Copyright 2026 The qwalk-nm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Static SVG line plots. Output depends only on the data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk::io {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;

  std::string render(int width = 720, int height = 440) const;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
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

inline constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                           "#66a61e", "#e6ab02", "#a6761d", "#666666"};

}  // namespace detail

inline std::string LinePlot::render(int width, int height) const {
  const double left = 70, right = 170, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ShapeError("plot series '" + s.label + "': x/y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       detail::escape(title) + "</text>\n";
  o += "<rect x=\"" + detail::num(left) + "\" y=\"" + detail::num(top) + "\" width=\"" +
       detail::num(pw) + "\" height=\"" + detail::num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double px = sx(xv);
    o += "<line x1=\"" + detail::num(px) + "\" y1=\"" + detail::num(top + ph) + "\" x2=\"" +
         detail::num(px) + "\" y2=\"" + detail::num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + detail::num(px) + "\" y=\"" + detail::num(top + ph + 18) +
         "\" text-anchor=\"middle\">" + detail::tick_label(xv) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double yv = y0 + (y1 - y0) * i / 5.0;
    const double py = top + (1.0 - i / 5.0) * ph;
    o += "<line x1=\"" + detail::num(left - 5) + "\" y1=\"" + detail::num(py) + "\" x2=\"" +
         detail::num(left) + "\" y2=\"" + detail::num(py) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + detail::num(left - 8) + "\" y=\"" + detail::num(py + 4) +
         "\" text-anchor=\"end\">" + detail::tick_label(log_y ? std::pow(10.0, yv) : yv) + "</text>\n";
  }
  o += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"" + detail::num(height - 10.0) +
       "\" text-anchor=\"middle\">" + detail::escape(x_label) + "</text>\n";
  o += "<text transform=\"translate(16," + detail::num(top + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" +
       detail::escape(y_label + (log_y ? " (log)" : "")) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = detail::kPalette[k % std::size(detail::kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0)) continue;
      if (!pts.empty()) pts += ' ';
      pts += detail::num(sx(s.x[i])) + "," + detail::num(sy(s.y[i]));
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    o += "<line x1=\"" + detail::num(left + pw + 12) + "\" y1=\"" + detail::num(ly - 4) + "\" x2=\"" +
         detail::num(left + pw + 36) + "\" y2=\"" + detail::num(ly - 4) + "\" stroke=\"" + colour +
         "\" stroke-width=\"2\"" + (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    o += "<text x=\"" + detail::num(left + pw + 42) + "\" y=\"" + detail::num(ly) + "\">" +
         detail::escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace qwalk::io
