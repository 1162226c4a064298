// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "schedlab/kernels.hpp"
#include "schedlab/parallel.hpp"
#include "schedlab/sampler.hpp"

using namespace schedlab;

namespace {

Dataset two_point_2d() {
  Dataset ds;
  ds.n = 2;
  ds.d = 2;
  ds.values = {0.8f, -0.5f, -0.6f, 0.7f};
  ds.finalize();
  return ds;
}

double dist_to_nearest_row(const Dataset& ds, const std::vector<double>& x) {
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < ds.n; ++i) {
    double sq = 0.0;
    for (std::int64_t j = 0; j < ds.d; ++j) {
      const double d = x[j] - static_cast<double>(ds.row(i)[j]);
      sq += d * d;
    }
    best = std::min(best, std::sqrt(sq));
  }
  return best;
}

}  // namespace

TEST_CASE("conditional fm oracle collapses onto a single data point") {
  const std::int64_t d = 12;
  const Dataset ds = synth_single_point(d, SinglePointFill::uniform_pm1, 0.0, 3);
  const auto spec = ScheduleSpec::fm();
  const auto view = make_view(spec);
  const int N = 1000;
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, N));
  SamplerOptions opts;
  opts.record_trajectory = true;
  const SamplerRun run =
      run_sampler(ds, view, plan, SamplerMode::conditional, 7, opts);

  double final_err = 0.0;
  for (std::int64_t j = 0; j < d; ++j) {
    const double dlt = run.x_final[j] - static_cast<double>(ds.row(0)[j]);
    final_err += dlt * dlt;
  }
  CHECK(std::sqrt(final_err) < 1e-3);

  // the exact trajectory interpolates: x_i = x + t_i (x_0 - x)
  for (int i = 0; i <= N; i += 100) {
    const double t = plan.times[i];
    for (std::int64_t j = 0; j < d; ++j) {
      const double want = static_cast<double>(ds.row(0)[j]) +
                          t * (run.x0[j] - static_cast<double>(ds.row(0)[j]));
      CHECK(run.trajectory[i][j] == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("conditional fm lands on one of two points for almost every seed") {
  const Dataset ds = two_point_2d();
  const auto spec = ScheduleSpec::fm();
  const auto view = make_view(spec);
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, 1000));
  int close_hits = 0;
  const int kSeeds = 200;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const SamplerRun run =
        run_sampler(ds, view, plan, SamplerMode::conditional, seed);
    if (dist_to_nearest_row(ds, run.x_final) < 1e-2) ++close_hits;
  }
  CHECK(close_hits >= 190);
}

TEST_CASE("deterministic reruns and thread-count independence") {
  const Dataset ds = synth_points(5000, 16, SynthDistribution::uniform_pm1, 1.0, 5);
  const auto spec = ScheduleSpec::fm();
  const auto view = make_view(spec);
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, 4));
  const SamplerRun a = run_sampler(ds, view, plan, SamplerMode::unconditional, 3);
  const SamplerRun b = run_sampler(ds, view, plan, SamplerMode::unconditional, 3);
  CHECK(a.x_final == b.x_final);
  par::set_threads(1);
  const SamplerRun c = run_sampler(ds, view, plan, SamplerMode::unconditional, 3);
  par::set_threads(0);
  CHECK(a.x_final == c.x_final);
}

TEST_CASE("initial state matches the top-of-grid noise scale") {
  const Dataset ds = synth_single_point(4096, SinglePointFill::constant, 0.0, 1);
  const auto spec = ScheduleSpec::edm();
  const auto view = make_view(spec);
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, 4));
  const SamplerRun run =
      run_sampler(ds, view, plan, SamplerMode::conditional, 11);
  const double b_max = view.coeffs(plan.times[0]).b;
  double ms = 0.0;
  for (double v : run.x0) ms += v * v;
  ms /= static_cast<double>(run.x0.size());
  CHECK(std::sqrt(ms) == doctest::Approx(b_max).epsilon(0.05));
}

TEST_CASE("edm run applies the final output rescale") {
  const Dataset ds = synth_single_point(8, SinglePointFill::uniform_pm1, 0.0, 9);
  const auto spec = ScheduleSpec::edm(0.5);
  const auto view = make_view(spec);
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, 50));
  SamplerOptions opts;
  opts.record_trajectory = true;
  const SamplerRun run =
      run_sampler(ds, view, plan, SamplerMode::conditional, 2, opts);
  for (std::int64_t j = 0; j < ds.d; ++j)
    CHECK(run.x_final[j] ==
          doctest::Approx(run.trajectory.back()[j] * 0.5).epsilon(1e-15));
  // the rescaled output is the data point itself for a single-point oracle
  for (std::int64_t j = 0; j < ds.d; ++j)
    CHECK(run.x_final[j] ==
          doctest::Approx(static_cast<double>(ds.row(0)[j])).epsilon(1e-6));
}

TEST_CASE("paired gap is zero for a single-support discrete family") {
  ScheduleView single;
  single.discrete = true;
  single.t_lo = single.t_hi = 1.0;
  single.coeffs = [](double) { return TrainCoeffs{0.6, 0.4, -1.0, 1.0, 1.0}; };
  single.log_prior = [](double) { return 0.0; };
  const Dataset ds = synth_points(3, 4, SynthDistribution::uniform_pm1, 1.0, 8);
  SamplerPlan plan;
  plan.family = Family::iDDPM;
  plan.N = 3;
  plan.times = {1.0, 1.0, 1.0, 1.0};
  plan.kappa = {0.5, 0.5, 0.5};
  plan.eta = {0.2, 0.2, 0.2};
  plan.zeta = {0.1, 0.1, 0.1};
  const PairedDivergence pd = paired_divergence(ds, single, plan, 4);
  CHECK(pd.final_gap == 0.0);
  for (double g : pd.step_gap) CHECK(g == 0.0);
}

TEST_CASE("gap starts at zero and stays finite") {
  const Dataset ds = two_point_2d();
  const auto spec = ScheduleSpec::fm();
  const auto view = make_view(spec);
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, 50));
  const PairedDivergence pd = paired_divergence(ds, view, plan, 21);
  CHECK(pd.step_gap[0] == 0.0);
  CHECK(pd.step_gap.size() == 51);
  for (double g : pd.step_gap) {
    CHECK(std::isfinite(g));
    CHECK(g >= 0.0);
  }
}

TEST_CASE("lambda zero reproduces the plain ddim ode run bit for bit") {
  const Dataset ds = two_point_2d();
  const auto spec = ScheduleSpec::ddim(1000);
  const auto view = make_view(spec);
  const auto grid = make_time_grid(spec, 20);
  const auto ode = sampler_coefficients(spec, grid);
  const auto at0 = sampler_coefficients(spec, grid, 0.0);
  const PairedDivergence a = paired_divergence(ds, view, ode, 17);
  const PairedDivergence b = paired_divergence(ds, view, at0, 17);
  CHECK(a.step_gap == b.step_gap);
}

TEST_CASE("stochasticity shrinks the paired divergence on the ddim toy") {
  const Dataset ds = two_point_2d();
  const auto spec = ScheduleSpec::ddim(1000);
  const auto view = make_view(spec);
  const auto grid = make_time_grid(spec, 50);
  const auto ode = sampler_coefficients(spec, grid, 0.0);
  const auto sde = sampler_coefficients(spec, grid, 1.0);
  double gap0 = 0.0, gap1 = 0.0;
  const int kSeeds = 50;
  for (int seed = 0; seed < kSeeds; ++seed) {
    gap0 += paired_divergence(ds, view, ode, seed).final_gap;
    gap1 += paired_divergence(ds, view, sde, seed).final_gap;
  }
  CHECK(gap1 / kSeeds < gap0 / kSeeds);
}
