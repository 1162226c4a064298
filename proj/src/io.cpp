// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace schedlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed on " + path);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw IoError("write failed on " + path);
}

namespace {

const char* kPalette[] = {"#d64541", "#2e6da4", "#3a8f5f", "#8e5aa8",
                          "#c78a1e", "#4b4b4b"};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void emit_svg_lineplot(const std::vector<SvgSeries>& series, const SvgAxes& axes,
                       const std::string& path) {
  if (series.empty()) throw DomainError("emit_svg_lineplot: no series");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw DomainError("emit_svg_lineplot: empty or ragged series '" +
                        s.label + "'");
    for (double v : s.x)
      if (!std::isfinite(v))
        throw DomainError("emit_svg_lineplot: non-finite x value");
  }

  // Log axis: clamp non-positive y to a floor one decade below the smallest
  // positive value.
  double min_pos = std::numeric_limits<double>::infinity();
  int clamped = 0;
  for (const auto& s : series)
    for (double v : s.y)
      if (v > 0.0) min_pos = std::min(min_pos, v);
  if (axes.log_y && !std::isfinite(min_pos))
    throw DomainError("emit_svg_lineplot: log scale needs a positive value");
  const double floor_y = axes.log_y ? min_pos / 10.0 : 0.0;

  auto ty = [&](double v) {
    if (!axes.log_y) return v;
    if (!(v > 0.0)) return std::log10(floor_y);
    return std::log10(v);
  };

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      const double v = ty(s.y[i]);
      if (axes.log_y && !(s.y[i] > 0.0)) ++clamped;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }

  const double ml = 72, mr = 24, mt = 40, mb = 52;
  const double pw = axes.width - ml - mr, ph = axes.height - mt - mb;
  auto px = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double v) { return mt + (y_hi - ty(v)) / (y_hi - y_lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << axes.width
      << "\" height=\"" << axes.height << "\" viewBox=\"0 0 " << axes.width
      << " " << axes.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << axes.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << axes.title
      << "</text>\n";

  // axes + ticks
  svg << "<rect x=\"" << fmt2(ml) << "\" y=\"" << fmt2(mt) << "\" width=\""
      << fmt2(pw) << "\" height=\"" << fmt2(ph)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  const int nticks = 5;
  for (int k = 0; k <= nticks; ++k) {
    const double fx = x_lo + (x_hi - x_lo) * k / nticks;
    svg << "<text x=\"" << fmt2(px(fx)) << "\" y=\"" << fmt2(mt + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt_tick(fx) << "</text>\n";
    const double fy = y_lo + (y_hi - y_lo) * k / nticks;
    const double raw = axes.log_y ? std::pow(10.0, fy) : fy;
    svg << "<text x=\"" << fmt2(ml - 6) << "\" y=\""
        << fmt2(mt + ph - ph * k / nticks + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(raw) << "</text>\n";
  }
  svg << "<text x=\"" << axes.width / 2 << "\" y=\"" << axes.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << axes.x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << axes.height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << axes.height / 2 << ")\">"
      << axes.y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (s.x.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        svg << (i ? " " : "") << fmt2(px(s.x[i])) << "," << fmt2(py(s.y[i]));
      svg << "\"/>\n";
    }
    if (s.x.size() <= 64)
      for (std::size_t i = 0; i < s.x.size(); ++i)
        svg << "<circle cx=\"" << fmt2(px(s.x[i])) << "\" cy=\""
            << fmt2(py(s.y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << fmt2(ml + pw - 8) << "\" y=\""
        << fmt2(mt + 16 + 16 * static_cast<double>(si))
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
        << "fill=\"" << color << "\">" << s.label << "</text>\n";
  }
  if (clamped > 0)
    svg << "<text x=\"" << fmt2(ml + 4) << "\" y=\"" << fmt2(mt + 14)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#b00\">"
        << "warning: " << clamped
        << " non-positive value(s) clamped to axis floor</text>\n";
  svg << "</svg>\n";
  write_text_file(path, svg.str());
}

}  // namespace schedlab
