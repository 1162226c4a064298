// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo estimation of the per-step quantities delta_i (gap between the
// marginalised and conditional targets) and L_i (local Lipschitz probe of
// R(.|t_i)), and assembly of the accumulated divergence bound
//
//   |x_N - x_N'|  <=  sum_i A_i B_i,
//   A_i = prod_{j>i} (kappa_j + |eta_j| L_j),   B_i = |eta_i| delta_i.
//
// Per-step probe seeds are derived from (seed, step, sample), so estimates
// do not depend on scheduling order.

#pragma once

#include <cstdint>

#include "schedlab/targets.hpp"

namespace schedlab {

struct BoundConfig {
  int samples = 10;
  double probe_eps = 0.01;
  std::uint64_t seed = 0;
  PosteriorConfig posterior;
};

struct DeltaProbe {
  std::int64_t index = 0;     // data row the probe corrupted
  std::uint64_t eps_seed = 0; // seed handed to corrupt()
  double value = 0.0;         // |R(z) - R(z|t_i)| for this probe
};

struct DeltaEstimate {
  double value = 0.0;
  // Smallest number of contributing posterior grid points seen across the
  // probes; tiny values mean t_i sits below the posterior's resolvable
  // range and the estimate is reported but flagged.
  int min_support = 0;
  std::vector<DeltaProbe> probes;
};

DeltaEstimate estimate_delta(const Dataset& ds, const ScheduleView& view,
                             double t_i, int step_index, const BoundConfig& cfg);

double estimate_lipschitz(const Dataset& ds, const ScheduleView& view,
                          double t_i, int step_index, const BoundConfig& cfg);

struct BoundEstimate {
  Family family = Family::FM;
  int N = 0;
  std::vector<double> t, kappa, eta;
  std::vector<double> L, delta;
  std::vector<double> A, B, term;  // term_i = A_i * B_i
  std::vector<int> flagged;        // steps with collapsed posterior support
  double accumulated = 0.0;
  double accumulated_drop_last10 = 0.0;  // sum over i < N-10
  int samples = 0;
  double probe_eps = 0.0;
  std::uint64_t seed = 0;
};

// Assembles A, B and the accumulated sum from per-step estimates.
BoundEstimate accumulate_bound(const SamplerPlan& plan,
                               const std::vector<double>& L,
                               const std::vector<double>& delta);

// Full pipeline: estimates delta_i and L_i at every plan step, then
// accumulates.
BoundEstimate estimate_bound(const Dataset& ds, const ScheduleView& view,
                             const SamplerPlan& plan, const BoundConfig& cfg);

struct RecursionCheck {
  double fraction = 0.0;
  std::vector<int> violations;
};

// Checks the one-step inequality
//   gap_{i+1} <= (kappa_i + |eta_i| L_i) gap_i + |eta_i| delta_i
// on recorded per-step gaps (size N+1, gap_0 first).
RecursionCheck verify_step_recursion(const std::vector<double>& step_gaps,
                                     const SamplerPlan& plan,
                                     const std::vector<double>& L,
                                     const std::vector<double>& delta);

}  // namespace schedlab
