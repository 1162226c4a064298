// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Posterior noise-level distribution p(t|z) on a two-stage grid.
//
// Stage 1 evaluates log p(t) p(z|t) on a coarse grid over the schedule's
// domain and keeps the interval [l, r] of points within a log-threshold of
// the maximum (padded by one coarse cell). Stage 2 re-evaluates on a fine
// grid inside [l, r], normalises under the trapezoidal measure, and reports
// mean and variance of t.
//
// EDM-style families integrate in u = ln t over the truncated support.
// Discrete families (iDDPM/DDIM) replace quadrature by exact summation over
// the integers in [l, r].

#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "schedlab/mixture.hpp"

namespace schedlab {

struct PosteriorConfig {
  int coarse_n = 100;
  int refine_n = 100;
  // Coarse points more than this many nats below the peak are dropped when
  // choosing [l, r]; e^-40 is below double-precision relevance.
  double drop_log_threshold = 40.0;
  // Skip the coarse stage and lay refine_n points over the whole domain.
  bool single_stage = false;
};

struct PosteriorEval {
  std::vector<double> coarse_t, coarse_log;
  double l = 0.0, r = 0.0;              // refined interval, t coordinates
  std::vector<double> t;                // refined grid
  std::vector<double> log_unnorm;       // log p(t) p(z|t), grid measure
  std::vector<double> weights;          // normalised, quadrature baked in
  double mean_t = 0.0, var_t = 0.0;

  // Caches reused by the target computations: the z scan plus per-grid-point
  // coefficients and softmax statistics.
  std::shared_ptr<ZScan> scan;
  std::vector<TrainCoeffs> cf;
  std::vector<WeightStats> ws;
};

PosteriorEval posterior_grid(const Dataset& ds, const ScheduleView& view,
                             std::shared_ptr<ZScan> scan,
                             const PosteriorConfig& cfg = {});
PosteriorEval posterior_grid(const Dataset& ds, const ScheduleView& view,
                             const std::vector<double>& z,
                             const PosteriorConfig& cfg = {});

// Single-stage dense quadrature over the full domain; the test oracle for
// the two-stage scheme. Returns (mean_t, var_t).
std::pair<double, double> brute_force_posterior(const Dataset& ds,
                                                const ScheduleView& view,
                                                const std::vector<double>& z,
                                                int n_points);

struct ProfileRow {
  double t_star = 0.0;
  int sample = 0;
  double mean_t = 0.0, var_t = 0.0;
};

// App-A.2-style protocol: for each t*, draw M noisy points and record the
// posterior mean/variance of each.
std::vector<ProfileRow> posterior_profile(const Dataset& ds,
                                          const ScheduleView& view,
                                          const std::vector<double>& t_stars,
                                          int samples_per_level,
                                          std::uint64_t seed,
                                          const PosteriorConfig& cfg = {});

}  // namespace schedlab
