// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/targets.hpp"

#include <cmath>

#include "schedlab/kernels.hpp"

namespace schedlab {

namespace {

struct GridTerm {
  double weight;  // posterior weight
  double alpha;   // d/b
  double gain;    // c - a d / b
  GridPointCoeffs pt;
};

// Refined-grid points that actually contribute: positive weight and a
// non-degenerate noise level.
std::vector<GridTerm> contributing_terms(const PosteriorEval& post) {
  std::vector<GridTerm> terms;
  terms.reserve(post.t.size());
  for (std::size_t k = 0; k < post.t.size(); ++k) {
    const TrainCoeffs& cf = post.cf[k];
    if (!(post.weights[k] > 0.0) || !(cf.b > 0.0)) continue;
    GridTerm g;
    g.weight = post.weights[k];
    g.alpha = cf.d / cf.b;
    g.gain = cf.c - cf.a * cf.d / cf.b;
    g.pt = {cf.a, cf.b, post.ws[k]};
    terms.push_back(g);
  }
  if (terms.empty())
    throw NoSupportError("targets: no contributing posterior grid point");
  return terms;
}

}  // namespace

std::vector<double> effective_target_cond(const ZScan& scan,
                                          const TrainCoeffs& cf) {
  if (!(cf.b > 0.0))
    throw DegenerateNoiseError("effective target: b(t) must be positive");
  const WeightStats ws = weight_stats(scan, cf.a, cf.b);
  std::vector<double> r = weighted_mean(scan, cf.a, cf.b, ws);
  const double alpha = cf.d / cf.b;
  const double gain = cf.c - cf.a * cf.d / cf.b;
  for (std::size_t j = 0; j < r.size(); ++j)
    r[j] = alpha * scan.z[j] + gain * r[j];
  return r;
}

std::vector<double> effective_target_cond(const Dataset& ds,
                                          const ScheduleView& view,
                                          const std::vector<double>& z,
                                          double t) {
  const ZScan scan = scan_point(ds, z);
  return effective_target_cond(scan, view.coeffs(t));
}

std::vector<double> effective_target_uncond(const PosteriorEval& post) {
  const auto terms = contributing_terms(post);
  std::vector<GridPointCoeffs> pts;
  std::vector<double> coef;
  double alpha_bar = 0.0;
  pts.reserve(terms.size());
  coef.reserve(terms.size());
  for (const auto& g : terms) {
    alpha_bar += g.weight * g.alpha;
    pts.push_back(g.pt);
    coef.push_back(g.weight * g.gain);
  }
  std::vector<double> r = collapsed_weighted_sum(*post.scan, pts, coef);
  for (std::size_t j = 0; j < r.size(); ++j)
    r[j] += alpha_bar * post.scan->z[j];
  return r;
}

EffectiveTargetEval target_gap(const Dataset& ds, const ScheduleView& view,
                               const PosteriorEval& post, const double* t_star) {
  (void)ds;
  const auto terms = contributing_terms(post);
  const auto dim = post.scan->z.size();

  std::vector<GridPointCoeffs> pts;
  pts.reserve(terms.size());
  for (const auto& g : terms) pts.push_back(g.pt);
  const auto means = weighted_means_multi(*post.scan, pts);

  // R_k = alpha_k z + gain_k m_k; accumulate the weighted average and the
  // weighted mean of |R_k|^2 as we go.
  std::vector<std::vector<double>> targets(terms.size());
  std::vector<double> r_bar(dim, 0.0);
  double mean_norm_sq = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& g = terms[k];
    auto& r = targets[k];
    r.resize(dim);
    for (std::size_t j = 0; j < dim; ++j)
      r[j] = g.alpha * post.scan->z[j] + g.gain * means[k][j];
    for (std::size_t j = 0; j < dim; ++j) r_bar[j] += g.weight * r[j];
    mean_norm_sq += g.weight * kern::sq_norm_f64(r.data(), dim);
  }

  EffectiveTargetEval ev;
  ev.r_uncond = r_bar;
  ev.norm_sq = kern::sq_norm_f64(r_bar.data(), dim);
  double gap = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k)
    gap += terms[k].weight *
           kern::sq_dist_f64(targets[k].data(), r_bar.data(), dim);
  ev.gap = gap;
  ev.gap_alt = mean_norm_sq - ev.norm_sq;
  ev.var_t = post.var_t;
  if (t_star)
    ev.r_cond = effective_target_cond(*post.scan, view.coeffs(*t_star));
  return ev;
}

EffectiveTargetEval target_gap(const Dataset& ds, const ScheduleView& view,
                               const std::vector<double>& z,
                               const PosteriorConfig& cfg, const double* t_star) {
  const PosteriorEval post = posterior_grid(ds, view, z, cfg);
  return target_gap(ds, view, post, t_star);
}

}  // namespace schedlab
