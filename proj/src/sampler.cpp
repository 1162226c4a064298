// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/sampler.hpp"

#include <cmath>
#include <string>

#include "schedlab/kernels.hpp"
#include "schedlab/rng.hpp"

namespace schedlab {

namespace {

constexpr std::uint64_t kTagInit = rng::fnv1a("sampler-init-noise");
constexpr std::uint64_t kTagStep = rng::fnv1a("sampler-step-noise");

std::vector<double> initial_state(const ScheduleView& view,
                                  const SamplerPlan& plan, std::int64_t d,
                                  std::uint64_t seed) {
  const double b_max = view.coeffs(plan.times[0]).b;
  auto eng = rng::engine(seed, kTagInit);
  std::vector<double> x0 = rng::gaussian_vec(eng, static_cast<std::size_t>(d));
  for (auto& v : x0) v *= b_max;
  return x0;
}

std::vector<double> oracle_target(const Dataset& ds, const ScheduleView& view,
                                  const std::vector<double>& x, double t_i,
                                  SamplerMode mode, const SamplerOptions& opts,
                                  int step) {
  try {
    if (mode == SamplerMode::conditional) {
      const ZScan scan = scan_point(ds, x);
      return effective_target_cond(scan, view.coeffs(t_i));
    }
    const PosteriorEval post = posterior_grid(ds, view, x, opts.posterior);
    return effective_target_uncond(post);
  } catch (const NoSupportError& e) {
    throw NoSupportError(std::string(e.what()) + " (sampler step " +
                         std::to_string(step) + ")");
  } catch (const DegenerateNoiseError& e) {
    throw DegenerateNoiseError(std::string(e.what()) + " (sampler step " +
                               std::to_string(step) + ")");
  }
}

}  // namespace

SamplerRun run_sampler(const Dataset& ds, const ScheduleView& view,
                       const SamplerPlan& plan, SamplerMode mode,
                       std::uint64_t seed, const SamplerOptions& opts) {
  SamplerRun run;
  run.mode = mode;
  run.seed = seed;
  run.x0 = initial_state(view, plan, ds.d, seed);
  std::vector<double> x = run.x0;
  if (opts.record_trajectory) run.trajectory.push_back(x);

  for (int i = 0; i < plan.N; ++i) {
    auto noise_eng = rng::engine(seed, kTagStep, static_cast<std::uint64_t>(i));
    const std::vector<double> noise =
        rng::gaussian_vec(noise_eng, static_cast<std::size_t>(ds.d));
    const std::vector<double> tgt =
        oracle_target(ds, view, x, plan.times[i], mode, opts, i);
    for (std::int64_t j = 0; j < ds.d; ++j)
      x[j] = plan.kappa[i] * x[j] + plan.eta[i] * tgt[j] +
             plan.zeta[i] * noise[j];
    if (opts.record_trajectory) run.trajectory.push_back(x);
  }

  run.x_final = std::move(x);
  if (plan.output_rescale != 1.0)
    for (auto& v : run.x_final) v *= plan.output_rescale;
  return run;
}

PairedDivergence paired_divergence(const Dataset& ds, const ScheduleView& view,
                                   const SamplerPlan& plan, std::uint64_t seed,
                                   const SamplerOptions& opts) {
  PairedDivergence pd;
  std::vector<double> xc = initial_state(view, plan, ds.d, seed);
  std::vector<double> xu = xc;
  pd.step_gap.reserve(plan.N + 1);
  pd.step_gap.push_back(0.0);

  for (int i = 0; i < plan.N; ++i) {
    auto noise_eng = rng::engine(seed, kTagStep, static_cast<std::uint64_t>(i));
    const std::vector<double> noise =
        rng::gaussian_vec(noise_eng, static_cast<std::size_t>(ds.d));
    const std::vector<double> tc = oracle_target(
        ds, view, xc, plan.times[i], SamplerMode::conditional, opts, i);
    const std::vector<double> tu = oracle_target(
        ds, view, xu, plan.times[i], SamplerMode::unconditional, opts, i);
    for (std::int64_t j = 0; j < ds.d; ++j) {
      xc[j] = plan.kappa[i] * xc[j] + plan.eta[i] * tc[j] + plan.zeta[i] * noise[j];
      xu[j] = plan.kappa[i] * xu[j] + plan.eta[i] * tu[j] + plan.zeta[i] * noise[j];
    }
    pd.step_gap.push_back(
        std::sqrt(kern::sq_dist_f64(xu.data(), xc.data(), xc.size())));
  }
  pd.final_gap = pd.step_gap.back();
  return pd;
}

}  // namespace schedlab
