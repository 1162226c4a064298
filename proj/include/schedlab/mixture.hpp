// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Log-domain evaluation of the finite-dataset Gaussian mixture
//   p(z|t) = (1/N) sum_i N(z; a(t) x_i, b(t)^2 I_d)
// and its softmax responsibilities. The expensive part, the dot products
// z.x_i against every row, is computed once per z (ZScan) and shared by all
// t evaluations; per-t quantities are O(N) on top of the cached scan:
//   |z - a x_i|^2 = |z|^2 - 2 a (z.x_i) + a^2 |x_i|^2.
//
// All dataset reductions run on a fixed chunk grid with a fixed-shape
// pairwise combine, so results are bitwise independent of the thread count.

#pragma once

#include <cstdint>
#include <vector>

#include "schedlab/dataset.hpp"

namespace schedlab {

struct ZScan {
  const Dataset* ds = nullptr;
  std::vector<double> z;
  std::vector<double> dots;  // z . x_i
  double z_sq = 0.0;
};

ZScan scan_point(const Dataset& ds, const std::vector<double>& z);

// logsumexp statistics of s_i = -|z - a x_i|^2 / (2 b^2).
struct WeightStats {
  double max_s = 0.0;
  double log_sum = 0.0;  // log sum_i exp(s_i - max_s)
  std::int64_t argmax = 0;
};

WeightStats weight_stats(const ZScan& scan, double a, double b);

// log p(z|t) given the stats at (a, b).
double log_density(const ZScan& scan, double a, double b, const WeightStats& ws);

// sum_i softmax_i(s) x_i — the posterior mean of x given (z, t).
std::vector<double> weighted_mean(const ZScan& scan, double a, double b,
                                  const WeightStats& ws);

// One fused pass computing the weighted mean at many (a, b) at once.
struct GridPointCoeffs {
  double a, b;
  WeightStats ws;
};
std::vector<std::vector<double>> weighted_means_multi(
    const ZScan& scan, const std::vector<GridPointCoeffs>& pts);

// sum_i (sum_k coef_k softmax_ik) x_i in a single dataset pass.
std::vector<double> collapsed_weighted_sum(const ZScan& scan,
                                           const std::vector<GridPointCoeffs>& pts,
                                           const std::vector<double>& coef);

// sum_i softmax_i (z . x_i), no dataset pass needed.
double weighted_dot_z(const ZScan& scan, double a, double b, const WeightStats& ws);

// Spec-level wrappers evaluating at a single (z, t).
struct MixtureEval {
  double log_density = 0.0;
  std::vector<double> log_weights;  // unnormalised log responsibilities s_i
  std::int64_t argmax = 0;
};

MixtureEval log_p_z_given_t(const Dataset& ds, const ScheduleView& view,
                            const std::vector<double>& z, double t);
std::vector<double> posterior_weighted_mean(const Dataset& ds,
                                            const ScheduleView& view,
                                            const std::vector<double>& z, double t);

}  // namespace schedlab
