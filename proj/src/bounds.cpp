// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/bounds.hpp"

#include <cmath>

#include "schedlab/kernels.hpp"
#include "schedlab/rng.hpp"

namespace schedlab {

namespace {

constexpr std::uint64_t kTagDeltaIdx = rng::fnv1a("bound-delta-index");
constexpr std::uint64_t kTagDeltaEps = rng::fnv1a("bound-delta-eps");
constexpr std::uint64_t kTagLipIdx = rng::fnv1a("bound-lip-index");
constexpr std::uint64_t kTagLipEps = rng::fnv1a("bound-lip-eps");
constexpr std::uint64_t kTagLipDir = rng::fnv1a("bound-lip-direction");

std::int64_t draw_index(const Dataset& ds, std::uint64_t seed, std::uint64_t tag,
                        int step, int j) {
  auto eng = rng::engine(seed, tag, static_cast<std::uint64_t>(step),
                         static_cast<std::uint64_t>(j));
  std::uniform_int_distribution<std::int64_t> pick(0, ds.n - 1);
  return pick(eng);
}

}  // namespace

DeltaEstimate estimate_delta(const Dataset& ds, const ScheduleView& view,
                             double t_i, int step_index, const BoundConfig& cfg) {
  const TrainCoeffs star = view.coeffs(t_i);
  if (!(star.b > 0.0))
    throw DegenerateNoiseError("estimate_delta: b(t_i) must be positive");
  const double alpha_star = star.d / star.b;
  const double gain_star = star.c - star.a * star.d / star.b;

  DeltaEstimate est;
  est.min_support = cfg.posterior.refine_n + 1;
  est.probes.reserve(cfg.samples);
  for (int j = 0; j < cfg.samples; ++j) {
    const std::int64_t idx = draw_index(ds, cfg.seed, kTagDeltaIdx, step_index, j);
    const std::uint64_t eps_seed =
        rng::derive(cfg.seed, kTagDeltaEps, static_cast<std::uint64_t>(step_index),
                    static_cast<std::uint64_t>(j));
    const NoisyPoint p = corrupt(ds, idx, t_i, view, eps_seed);
    const PosteriorEval post = posterior_grid(ds, view, p.z, cfg.posterior);

    // R(z) - R(z|t_i) in one collapsed dataset pass: the grid terms carry
    // weight_k * gain_k, the conditional point enters with -gain_star.
    std::vector<GridPointCoeffs> pts;
    std::vector<double> coef;
    double alpha_bar = 0.0;
    int support = 0;
    for (std::size_t k = 0; k < post.t.size(); ++k) {
      const TrainCoeffs& cf = post.cf[k];
      if (!(post.weights[k] > 0.0) || !(cf.b > 0.0)) continue;
      ++support;
      alpha_bar += post.weights[k] * cf.d / cf.b;
      pts.push_back({cf.a, cf.b, post.ws[k]});
      coef.push_back(post.weights[k] * (cf.c - cf.a * cf.d / cf.b));
    }
    if (support == 0)
      throw NoSupportError("estimate_delta: empty posterior support");
    est.min_support = std::min(est.min_support, support);
    const WeightStats ws_star = weight_stats(*post.scan, star.a, star.b);
    pts.push_back({star.a, star.b, ws_star});
    coef.push_back(-gain_star);

    std::vector<double> diff = collapsed_weighted_sum(*post.scan, pts, coef);
    const double da = alpha_bar - alpha_star;
    for (std::size_t jj = 0; jj < diff.size(); ++jj)
      diff[jj] += da * post.scan->z[jj];
    const double norm = std::sqrt(kern::sq_norm_f64(diff.data(), diff.size()));
    est.probes.push_back({idx, eps_seed, norm});
    est.value = std::max(est.value, norm);
  }
  return est;
}

double estimate_lipschitz(const Dataset& ds, const ScheduleView& view,
                          double t_i, int step_index, const BoundConfig& cfg) {
  const TrainCoeffs star = view.coeffs(t_i);
  if (!(star.b > 0.0))
    throw DegenerateNoiseError("estimate_lipschitz: b(t_i) must be positive");
  double L = 0.0;
  for (int j = 0; j < cfg.samples; ++j) {
    const std::int64_t idx = draw_index(ds, cfg.seed, kTagLipIdx, step_index, j);
    const NoisyPoint p = corrupt(ds, idx, t_i, view,
                                 rng::derive(cfg.seed, kTagLipEps,
                                             static_cast<std::uint64_t>(step_index),
                                             static_cast<std::uint64_t>(j)));
    auto dir_eng = rng::engine(cfg.seed, kTagLipDir,
                               static_cast<std::uint64_t>(step_index),
                               static_cast<std::uint64_t>(j));
    const std::vector<double> dir =
        rng::gaussian_vec(dir_eng, static_cast<std::size_t>(ds.d));
    std::vector<double> z2(p.z);
    for (std::size_t jj = 0; jj < z2.size(); ++jj)
      z2[jj] += cfg.probe_eps * dir[jj];

    const ZScan s1 = scan_point(ds, p.z);
    const ZScan s2 = scan_point(ds, z2);
    const std::vector<double> r1 = effective_target_cond(s1, star);
    const std::vector<double> r2 = effective_target_cond(s2, star);
    const double num = std::sqrt(kern::sq_dist_f64(r2.data(), r1.data(), r1.size()));
    const double den =
        cfg.probe_eps * std::sqrt(kern::sq_norm_f64(dir.data(), dir.size()));
    L = std::max(L, num / den);
  }
  return L;
}

BoundEstimate accumulate_bound(const SamplerPlan& plan,
                               const std::vector<double>& L,
                               const std::vector<double>& delta) {
  const std::size_t N = static_cast<std::size_t>(plan.N);
  if (L.size() != N || delta.size() != N)
    throw DomainError("accumulate_bound: array length mismatch");
  BoundEstimate b;
  b.family = plan.family;
  b.N = plan.N;
  b.t.assign(plan.times.begin(), plan.times.begin() + plan.N);
  b.kappa = plan.kappa;
  b.eta = plan.eta;
  b.L = L;
  b.delta = delta;
  b.A.assign(N, 1.0);
  b.B.resize(N);
  b.term.resize(N);
  for (std::size_t i = N - 1; i-- > 0;)
    b.A[i] = b.A[i + 1] * (plan.kappa[i + 1] + std::abs(plan.eta[i + 1]) * L[i + 1]);
  for (std::size_t i = 0; i < N; ++i) {
    b.B[i] = std::abs(plan.eta[i]) * delta[i];
    b.term[i] = b.A[i] * b.B[i];
    b.accumulated += b.term[i];
    if (static_cast<int>(i) < plan.N - 10) b.accumulated_drop_last10 += b.term[i];
  }
  return b;
}

BoundEstimate estimate_bound(const Dataset& ds, const ScheduleView& view,
                             const SamplerPlan& plan, const BoundConfig& cfg) {
  std::vector<double> L(plan.N), delta(plan.N);
  std::vector<int> flagged;
  for (int i = 0; i < plan.N; ++i) {
    const double t_i = plan.times[i];
    const DeltaEstimate de = estimate_delta(ds, view, t_i, i, cfg);
    delta[i] = de.value;
    L[i] = estimate_lipschitz(ds, view, t_i, i, cfg);
    if (de.min_support < 3) flagged.push_back(i);
  }
  BoundEstimate b = accumulate_bound(plan, L, delta);
  b.flagged = std::move(flagged);
  b.samples = cfg.samples;
  b.probe_eps = cfg.probe_eps;
  b.seed = cfg.seed;
  return b;
}

RecursionCheck verify_step_recursion(const std::vector<double>& step_gaps,
                                     const SamplerPlan& plan,
                                     const std::vector<double>& L,
                                     const std::vector<double>& delta) {
  const std::size_t N = static_cast<std::size_t>(plan.N);
  if (step_gaps.size() != N + 1)
    throw DomainError("verify_step_recursion: need N+1 per-step gaps");
  if (L.size() != N || delta.size() != N)
    throw DomainError("verify_step_recursion: array length mismatch");
  RecursionCheck rc;
  int ok = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double rhs = (plan.kappa[i] + std::abs(plan.eta[i]) * L[i]) * step_gaps[i] +
                       std::abs(plan.eta[i]) * delta[i];
    // tiny relative slack so exact-equality cases are not counted as
    // violations through rounding
    if (step_gaps[i + 1] <= rhs * (1.0 + 1e-12) + 1e-300) {
      ++ok;
    } else {
      rc.violations.push_back(static_cast<int>(i));
    }
  }
  rc.fraction = static_cast<double>(ok) / static_cast<double>(N);
  return rc;
}

}  // namespace schedlab
