// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "schedlab/io.hpp"

using namespace schedlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "schedlab_io_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("double formatting round-trips") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double v = u(eng) * std::pow(10.0, i % 13 - 6);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv writer emits header and rows") {
  const fs::path p = temp_dir() / "t.csv";
  write_csv(p.string(), {"a", "b"}, {{1.0, 2.5}, {3.0, 0.1}});
  const std::string text = slurp(p);
  CHECK(text.find("a,b\n") == 0);
  CHECK(text.find("1,2.5\n") != std::string::npos);
  // the written value parses back exactly
  CHECK(text.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("svg line plots") {
  SUBCASE("single point renders a marker") {
    const fs::path p = temp_dir() / "single.svg";
    emit_svg_lineplot({{"one", {1.0}, {2.0}}}, {"tt", "x", "y", false}, p.string());
    const std::string svg = slurp(p);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  SUBCASE("log axis clamps non-positive values with a warning") {
    const fs::path p = temp_dir() / "log.svg";
    emit_svg_lineplot({{"s", {0.0, 1.0, 2.0}, {0.0, 10.0, 100.0}}},
                      {"tt", "x", "y", true}, p.string());
    const std::string svg = slurp(p);
    CHECK(svg.find("clamped to axis floor") != std::string::npos);
  }
  SUBCASE("byte-identical output for identical input") {
    const fs::path p1 = temp_dir() / "a.svg";
    const fs::path p2 = temp_dir() / "b.svg";
    const std::vector<SvgSeries> series{
        {"u", {0, 1, 2, 3}, {1.0, 0.5, 0.25, 0.125}},
        {"v", {0, 1, 2, 3}, {2.0, 4.0, 8.0, 16.0}}};
    emit_svg_lineplot(series, {"tt", "x", "y", true}, p1.string());
    emit_svg_lineplot(series, {"tt", "x", "y", true}, p2.string());
    CHECK(slurp(p1) == slurp(p2));
    CHECK(!slurp(p1).empty());
  }
  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(
        emit_svg_lineplot({}, {"t", "x", "y", false},
                          (temp_dir() / "e.svg").string()),
        DomainError);
    CHECK_THROWS_AS(
        emit_svg_lineplot({{"empty", {}, {}}}, {"t", "x", "y", false},
                          (temp_dir() / "e.svg").string()),
        DomainError);
  }
}
