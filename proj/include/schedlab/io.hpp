// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Report emission: CSV (17 significant digits), JSON summaries, and a small
// deterministic SVG line-plot writer.

#pragma once

#include <string>
#include <vector>

#include "schedlab/errors.hpp"

namespace schedlab {

// Formats a double with up to 17 significant digits (round-trip safe).
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& contents);

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

struct SvgAxes {
  std::string title, x_label, y_label;
  bool log_y = false;
  int width = 880, height = 540;
};

// Standalone SVG with one polyline per series; byte output is a pure
// function of the inputs. On a log axis, non-positive values are clamped to
// the axis floor and the plot carries a warning annotation.
void emit_svg_lineplot(const std::vector<SvgSeries>& series, const SvgAxes& axes,
                       const std::string& path);

}  // namespace schedlab
