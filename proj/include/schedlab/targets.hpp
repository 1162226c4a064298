// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed-form effective regression targets.
//
//   R(z|t) = (d/b) z + (c - a d / b) m(z, t),   m = posterior mean of x
//   R(z)   = E_{t ~ p(t|z)} R(z|t)
//   E(z)   = E_{t ~ p(t|z)} |R(z|t) - R(z)|^2
//
// R(z) and E(z) integrate over the posterior's refined grid, reusing its
// cached scan and softmax statistics; no fresh dataset scans are made beyond
// the fused weighted-mean pass.

#pragma once

#include "schedlab/posterior.hpp"

namespace schedlab {

std::vector<double> effective_target_cond(const Dataset& ds,
                                          const ScheduleView& view,
                                          const std::vector<double>& z, double t);

// Variant reusing an existing scan (one z, many t).
std::vector<double> effective_target_cond(const ZScan& scan,
                                          const TrainCoeffs& cf);

// Trapezoidal integral of R(z|t) against the refined-grid weights.
// Computed in a single collapsed dataset pass.
std::vector<double> effective_target_uncond(const PosteriorEval& post);

struct EffectiveTargetEval {
  std::vector<double> r_cond;    // R(z|t*) when t* was supplied
  std::vector<double> r_uncond;  // R(z)
  double gap = 0.0;              // E(z), direct integral
  double gap_alt = 0.0;          // E(z) via  E|R|^2 - |R-bar|^2
  double norm_sq = 0.0;          // |R(z)|^2
  double var_t = 0.0;            // posterior variance (Table-row companion)
};

// Full evaluation for one noisy point. When t_star is supplied, R(z|t*) is
// also reported. The posterior is computed internally with `cfg`.
EffectiveTargetEval target_gap(const Dataset& ds, const ScheduleView& view,
                               const std::vector<double>& z,
                               const PosteriorConfig& cfg = {},
                               const double* t_star = nullptr);

// Same, against a posterior the caller already computed.
EffectiveTargetEval target_gap(const Dataset& ds, const ScheduleView& view,
                               const PosteriorEval& post,
                               const double* t_star = nullptr);

}  // namespace schedlab
