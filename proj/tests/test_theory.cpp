// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "schedlab/theory.hpp"

using namespace schedlab;

TEST_CASE("posterior variance scaling cells sit inside the acceptance band") {
  const ValidationReport rep =
      validate_variance_scaling({256, 1024}, {0.2, 0.8}, 12, 5);
  CHECK(rep.rows.size() == 4);
  for (const auto& r : rep.rows) {
    INFO(r.config, " ratio=", r.ratio);
    CHECK(r.pass);
    CHECK(r.ratio > 0.7);
    CHECK(r.ratio < 1.3);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("the theoretical estimate halves when d doubles") {
  const ValidationReport rep =
      validate_variance_scaling({512, 1024}, {0.5}, 2, 3);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].estimate == doctest::Approx(2.0 * rep.rows[1].estimate)
                                    .epsilon(1e-15));
}

TEST_CASE("gap table runs and maps noise levels across families") {
  const Dataset ds = synth_points(16, 32, SynthDistribution::uniform_pm1, 1.0, 9);
  SUBCASE("fm keeps t* as is") {
    const GapTable t =
        validate_target_gap(ds, ScheduleSpec::fm(), {0.3, 0.5}, 3, 7);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].mapped_t == 0.3);
    CHECK(t.rows[0].e_estimate ==
          doctest::Approx(0.5 * (1.0 + t.sigma_d * t.sigma_d)));
    CHECK(t.samples.size() == 6);
  }
  SUBCASE("edm maps by signal-to-noise ratio") {
    const GapTable t =
        validate_target_gap(ds, ScheduleSpec::edm(), {0.5, 0.9}, 2, 7);
    CHECK(t.rows[0].mapped_t == doctest::Approx(1.0));  // 0.5/(1-0.5)
    CHECK(t.rows[1].mapped_t == doctest::Approx(9.0));  // 0.9/(1-0.9)
  }
  SUBCASE("vp families pick the nearest integer level") {
    const auto spec = ScheduleSpec::ddim(1000);
    const GapTable t = validate_target_gap(ds, spec, {0.5}, 2, 7);
    const double mapped = t.rows[0].mapped_t;
    CHECK(mapped == std::floor(mapped));
    const auto cf = eval_train_schedule(spec, mapped);
    // snr(t) == 1 at the mapped level, up to grid resolution
    CHECK(cf.b / cf.a == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("reference band logic accepts the published values and rejects drift") {
  GapTable table;
  table.sigma_d = 0.506;
  for (int i = 0; i < 5; ++i) {
    GapTableRow row;
    row.t_star = reference::kTStars[i];
    row.var_mean = reference::kVarEmpirical[i];
    row.var_estimate = row.t_star * row.t_star / (2.0 * 3072.0);
    row.e_mean = i < 4 ? reference::kGapEmpirical[i] : 1.8;
    row.e_estimate = 0.628;
    row.rsq_mean = i < 4 ? reference::kRNormSqEmpirical[i] : 3310.0;
    table.rows.push_back(row);
  }
  const ValidationReport ok = compare_gap_table_to_reference(table);
  CHECK(ok.all_pass());

  GapTable bad = table;
  bad.rows[2].var_mean *= 1.25;  // outside the +-15% band
  const ValidationReport rep = compare_gap_table_to_reference(bad);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("bound reference bands encode the published table") {
  auto entry = [](Family f, double accumulated) {
    BoundTableEntry e;
    e.family = f;
    e.bound.accumulated = accumulated;
    return e;
  };
  const std::vector<BoundTableEntry> good{
      entry(Family::DDIM, 3e6), entry(Family::EDM, 1e3), entry(Family::FM, 1e2),
      entry(Family::uEDM, 0.9e2)};
  CHECK(compare_bound_table_to_reference(good).all_pass());

  const std::vector<BoundTableEntry> bad{
      entry(Family::DDIM, 1e4),  // not >> EDM by an order of magnitude
      entry(Family::EDM, 5e3), entry(Family::FM, 1e2), entry(Family::uEDM, 1e2)};
  CHECK_FALSE(compare_bound_table_to_reference(bad).all_pass());
}

TEST_CASE("family ordering of accumulated bounds is stable across seeds") {
  // scaled-down analogue of the published comparison: same machinery, toy data
  const Dataset ds = synth_points(4, 8, SynthDistribution::uniform_pm1, 1.0, 77);
  const std::vector<ScheduleSpec> specs{
      ScheduleSpec::ddim(1000), ScheduleSpec::edm(0.5), ScheduleSpec::fm(),
      ScheduleSpec::uedm(0.5)};
  int ddim_largest = 0, fm_uedm_close = 0;
  const int kSeeds = 10;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto entries = reproduce_bound_table(ds, specs, 50, seed, 6);
    REQUIRE(entries.size() == 4);
    const double ddim = entries[0].bound.accumulated;
    const double edm = entries[1].bound.accumulated;
    const double fm = entries[2].bound.accumulated;
    const double uedm = entries[3].bound.accumulated;
    if (ddim > edm && ddim > fm && ddim > uedm) ++ddim_largest;
    if (fm / uedm < 3.0 && uedm / fm < 3.0) ++fm_uedm_close;
    for (const auto& e : entries) CHECK(std::isfinite(e.bound.accumulated));
  }
  CHECK(ddim_largest == kSeeds);
  CHECK(fm_uedm_close >= 8);
}

TEST_CASE("report rows are reproducible from the seed") {
  const ValidationReport a = validate_variance_scaling({256}, {0.5}, 6, 123);
  const ValidationReport b = validate_variance_scaling({256}, {0.5}, 6, 123);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].empirical == b.rows[i].empirical);
}
