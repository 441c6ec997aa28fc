#pragma once

// Minimal SVG output for training curves and the confusion heatmap. Output is
// a pure function of the inputs (no timestamps), so reruns are byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "senti/error.hpp"
#include "senti/eval.hpp"

namespace senti::plot {

struct Series {
  std::string name;
  std::vector<double> values;  // y at x = 1, 2, ...
  std::string color;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
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
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

inline std::string line_chart(const std::string& title, const std::string& y_label, std::span<const Series> series) {
  constexpr double W = 640, H = 400, left = 60, right = 20, top = 40, bottom = 50;
  std::size_t n = 0;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& s : series)
    for (double v : s.values) {
      n = std::max(n, s.values.size());
      if (!std::isfinite(v)) continue;
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  lo = std::min(lo, 0.0);
  if (hi <= lo) hi = lo + 1.0;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](std::size_t i) { return left + (n <= 1 ? pw / 2 : pw * static_cast<double>(i) / static_cast<double>(n - 1)); };
  auto py = [&](double v) { return top + ph * (1.0 - (v - lo) / (hi - lo)); };
  using detail::num;

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       detail::escape(title) + "</text>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
       num(top + ph) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) +
       "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(v) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) + "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i)
    if (n <= 10 || i % ((n + 9) / 10) == 0 || i + 1 == n)
      s += "<text x=\"" + num(px(i)) + "\" y=\"" + num(top + ph + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(i + 1) +
           "</text>\n";
  s += "<text x=\"320\" y=\"" + num(H - 10) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">epoch</text>\n";
  s += "<text x=\"14\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 " +
       num(top + ph / 2) + ")\">" + detail::escape(y_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    std::string pts;
    for (std::size_t i = 0; i < sr.values.size(); ++i) {
      if (!std::isfinite(sr.values[i])) continue;
      if (!pts.empty()) pts.push_back(' ');
      pts += num(px(i)) + "," + num(py(sr.values[i]));
    }
    s += "<polyline fill=\"none\" stroke=\"" + sr.color + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(k);
    s += "<line x1=\"" + num(left + pw - 130) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(left + pw - 110) +
         "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + sr.color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(left + pw - 104) + "\" y=\"" + num(ly) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
         detail::escape(sr.name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

// 2x2 heatmap, rows = actual (negative, positive), columns = predicted.
inline std::string confusion_heatmap(const eval::ConfusionMatrix& cm) {
  const std::uint64_t cells[2][2] = {{cm.tn, cm.fp}, {cm.fn, cm.tp}};
  std::uint64_t mx = 1;
  for (auto& r : cells)
    for (auto c : r) mx = std::max(mx, c);
  const char* names[2] = {"negative", "positive"};
  using detail::num;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"420\" height=\"400\" viewBox=\"0 0 420 400\">\n";
  s += "<rect width=\"420\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"250\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">Confusion matrix</text>\n";
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const double t = static_cast<double>(cells[r][c]) / static_cast<double>(mx);
      const int shade = static_cast<int>(std::lround(235 - 185 * t));
      const double x = 120 + 140 * c, y = 60 + 140 * r;
      s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"140\" height=\"140\" fill=\"rgb(" +
           std::to_string(shade) + "," + std::to_string(shade) + ",255)\" stroke=\"black\"/>\n";
      s += "<text x=\"" + num(x + 70) + "\" y=\"" + num(y + 76) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"20\" fill=\"" +
           (t > 0.5 ? "white" : "black") + "\">" + std::to_string(cells[r][c]) + "</text>\n";
    }
  for (int k = 0; k < 2; ++k) {
    s += "<text x=\"" + num(190 + 140 * k) + "\" y=\"" + num(360) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + names[k] + "</text>\n";
    s += "<text x=\"112\" y=\"" + num(134 + 140 * k) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         names[k] + "</text>\n";
  }
  s += "<text x=\"260\" y=\"385\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">predicted</text>\n";
  s += "<text x=\"20\" y=\"200\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 20 200)\">actual</text>\n";
  s += "</svg>\n";
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

}  // namespace senti::plot
