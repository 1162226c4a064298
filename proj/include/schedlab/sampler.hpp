// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// The generic first-order sampler
//   x_{i+1} = kappa_i x_i + eta_i R(x_i [| t_i]) + zeta_i e_i
// driven by the closed-form effective target as a perfect oracle denoiser,
// in conditional (R(x|t_i)) and unconditional (R(x)) modes.
//
// Per-step noise e_i is indexed by (seed, i) and drawn even when zeta_i = 0,
// so ODE and SDE runs with the same seed see identical noise streams; paired
// runs share x_0 and every e_i by construction.

#pragma once

#include "schedlab/bounds.hpp"

namespace schedlab {

enum class SamplerMode { conditional, unconditional };

struct SamplerOptions {
  bool record_trajectory = false;
  PosteriorConfig posterior;  // used by the unconditional target
};

struct SamplerRun {
  SamplerMode mode = SamplerMode::conditional;
  std::uint64_t seed = 0;
  std::vector<double> x0;
  std::vector<double> x_final;  // after the family's output rescale
  std::vector<std::vector<double>> trajectory;  // x_0..x_N when recorded
};

SamplerRun run_sampler(const Dataset& ds, const ScheduleView& view,
                       const SamplerPlan& plan, SamplerMode mode,
                       std::uint64_t seed, const SamplerOptions& opts = {});

struct PairedDivergence {
  std::vector<double> step_gap;  // |x_i' - x_i| for i = 0..N
  double final_gap = 0.0;
};

// Runs conditional and unconditional trajectories from the same x_0 with the
// same noise stream and records the per-step divergence.
PairedDivergence paired_divergence(const Dataset& ds, const ScheduleView& view,
                                   const SamplerPlan& plan, std::uint64_t seed,
                                   const SamplerOptions& opts = {});

}  // namespace schedlab
