// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schedlab/rng.hpp"

namespace schedlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTagProfileIdx = rng::fnv1a("profile-index");
constexpr std::uint64_t kTagProfileEps = rng::fnv1a("profile-eps");

// log p(t) p(z|t) at one grid point; -inf where b(t) degenerates.
double eval_log_point(const ZScan& scan, const ScheduleView& view, double g,
                      double t, TrainCoeffs* cf_out, WeightStats* ws_out) {
  const TrainCoeffs cf = view.coeffs(t);
  if (cf_out) *cf_out = cf;
  if (!(cf.b > 0.0)) return kNegInf;
  const WeightStats ws = weight_stats(scan, cf.a, cf.b);
  if (ws_out) *ws_out = ws;
  return view.log_prior(g) + log_density(scan, cf.a, cf.b, ws);
}

double g_of_t(const ScheduleView& view, double t) {
  return view.log_quadrature ? std::log(t) : t;
}
double t_of_g(const ScheduleView& view, double g) {
  return view.log_quadrature ? std::exp(g) : g;
}

void finish_moments(PosteriorEval& ev) {
  double mean = 0.0;
  for (std::size_t k = 0; k < ev.t.size(); ++k) mean += ev.weights[k] * ev.t[k];
  double var = 0.0;
  for (std::size_t k = 0; k < ev.t.size(); ++k) {
    const double d = ev.t[k] - mean;
    var += ev.weights[k] * d * d;
  }
  ev.mean_t = mean;
  ev.var_t = var;
}

// Normalise exp(log_unnorm) against quadrature coefficients quad (trapezoid
// cell sizes, or all-ones for discrete sums).
void normalise(PosteriorEval& ev, const std::vector<double>& quad) {
  double mx = kNegInf;
  for (double v : ev.log_unnorm) mx = std::max(mx, v);
  if (mx == kNegInf)
    throw NoSupportError("posterior: zero mass on the whole refined grid");
  ev.weights.resize(ev.log_unnorm.size());
  double total = 0.0;
  for (std::size_t k = 0; k < ev.log_unnorm.size(); ++k) {
    const double raw =
        ev.log_unnorm[k] == kNegInf ? 0.0 : std::exp(ev.log_unnorm[k] - mx);
    ev.weights[k] = raw * quad[k];
    total += ev.weights[k];
  }
  for (auto& w : ev.weights) w /= total;
  finish_moments(ev);
}

PosteriorEval continuous_posterior(const Dataset& ds, const ScheduleView& view,
                                   std::shared_ptr<ZScan> scan,
                                   const PosteriorConfig& cfg) {
  (void)ds;
  PosteriorEval ev;
  ev.scan = std::move(scan);
  if (view.log_quadrature && !(view.t_lo > 0.0))
    throw DomainError("posterior: log-space quadrature needs t_lo > 0");
  const double g_lo = g_of_t(view, view.t_lo);
  const double g_hi = g_of_t(view, view.t_hi);

  double win_lo = g_lo, win_hi = g_hi;
  if (!cfg.single_stage) {
    const double step = (g_hi - g_lo) / cfg.coarse_n;
    ev.coarse_t.resize(cfg.coarse_n);
    ev.coarse_log.resize(cfg.coarse_n);
    double best = kNegInf;
    for (int k = 0; k < cfg.coarse_n; ++k) {
      const double g = g_lo + k * step;
      const double t = t_of_g(view, g);
      ev.coarse_t[k] = t;
      ev.coarse_log[k] = eval_log_point(*ev.scan, view, g, t, nullptr, nullptr);
      best = std::max(best, ev.coarse_log[k]);
    }
    if (best == kNegInf)
      throw NoSupportError("posterior: no coarse grid point carries mass");
    win_lo = g_hi;
    win_hi = g_lo;
    for (int k = 0; k < cfg.coarse_n; ++k) {
      if (ev.coarse_log[k] >= best - cfg.drop_log_threshold) {
        const double g = g_lo + k * step;
        win_lo = std::min(win_lo, g);
        win_hi = std::max(win_hi, g);
      }
    }
    // one-cell pad guards a peak straddling a cell boundary
    win_lo = std::max(g_lo, win_lo - step);
    win_hi = std::min(g_hi, win_hi + step);
  }
  ev.l = t_of_g(view, win_lo);
  ev.r = t_of_g(view, win_hi);

  const int K = cfg.refine_n;
  ev.t.resize(K);
  ev.log_unnorm.resize(K);
  ev.cf.resize(K);
  ev.ws.resize(K);
  const double h = K > 1 ? (win_hi - win_lo) / (K - 1) : 0.0;
  for (int k = 0; k < K; ++k) {
    const double g = K > 1 ? win_lo + k * h : 0.5 * (win_lo + win_hi);
    const double t = t_of_g(view, g);
    ev.t[k] = t;
    ev.log_unnorm[k] = eval_log_point(*ev.scan, view, g, t, &ev.cf[k], &ev.ws[k]);
  }
  std::vector<double> quad(K, h);
  if (K > 1) {
    quad.front() = 0.5 * h;
    quad.back() = 0.5 * h;
  } else {
    quad[0] = 1.0;
  }
  normalise(ev, quad);
  return ev;
}

PosteriorEval discrete_posterior(const Dataset& ds, const ScheduleView& view,
                                 std::shared_ptr<ZScan> scan,
                                 const PosteriorConfig& cfg) {
  (void)ds;
  PosteriorEval ev;
  ev.scan = std::move(scan);
  const int t_lo = static_cast<int>(view.t_lo);
  const int t_hi = static_cast<int>(view.t_hi);
  const int total = t_hi - t_lo + 1;

  int win_lo = t_lo, win_hi = t_hi;
  int spacing = 1;
  if (!cfg.single_stage && total > cfg.coarse_n) {
    ev.coarse_t.reserve(cfg.coarse_n);
    ev.coarse_log.reserve(cfg.coarse_n);
    double best = kNegInf;
    std::vector<int> ts;
    for (int k = 0; k < cfg.coarse_n; ++k) {
      const int t = t_lo + static_cast<int>(std::llround(
                               static_cast<double>(k) * (total - 1) /
                               (cfg.coarse_n - 1)));
      if (!ts.empty() && ts.back() == t) continue;
      ts.push_back(t);
    }
    spacing = std::max(1, (total - 1) / (cfg.coarse_n - 1));
    for (int t : ts) {
      const double lg =
          eval_log_point(*ev.scan, view, t, t, nullptr, nullptr);
      ev.coarse_t.push_back(t);
      ev.coarse_log.push_back(lg);
      best = std::max(best, lg);
    }
    if (best == kNegInf)
      throw NoSupportError("posterior: no coarse grid point carries mass");
    win_lo = t_hi;
    win_hi = t_lo;
    for (std::size_t k = 0; k < ev.coarse_t.size(); ++k) {
      if (ev.coarse_log[k] >= best - cfg.drop_log_threshold) {
        win_lo = std::min(win_lo, static_cast<int>(ev.coarse_t[k]));
        win_hi = std::max(win_hi, static_cast<int>(ev.coarse_t[k]));
      }
    }
    win_lo = std::max(t_lo, win_lo - spacing);
    win_hi = std::min(t_hi, win_hi + spacing);
  }
  ev.l = win_lo;
  ev.r = win_hi;

  const int K = win_hi - win_lo + 1;
  ev.t.resize(K);
  ev.log_unnorm.resize(K);
  ev.cf.resize(K);
  ev.ws.resize(K);
  for (int k = 0; k < K; ++k) {
    const double t = win_lo + k;
    ev.t[k] = t;
    ev.log_unnorm[k] = eval_log_point(*ev.scan, view, t, t, &ev.cf[k], &ev.ws[k]);
  }
  normalise(ev, std::vector<double>(K, 1.0));
  return ev;
}

}  // namespace

PosteriorEval posterior_grid(const Dataset& ds, const ScheduleView& view,
                             std::shared_ptr<ZScan> scan,
                             const PosteriorConfig& cfg) {
  if (cfg.coarse_n < 2 || cfg.refine_n < 1)
    throw DomainError("posterior_grid: grid sizes too small");
  return view.discrete ? discrete_posterior(ds, view, std::move(scan), cfg)
                       : continuous_posterior(ds, view, std::move(scan), cfg);
}

PosteriorEval posterior_grid(const Dataset& ds, const ScheduleView& view,
                             const std::vector<double>& z,
                             const PosteriorConfig& cfg) {
  return posterior_grid(ds, view, std::make_shared<ZScan>(scan_point(ds, z)),
                        cfg);
}

std::pair<double, double> brute_force_posterior(const Dataset& ds,
                                                const ScheduleView& view,
                                                const std::vector<double>& z,
                                                int n_points) {
  if (!view.discrete && n_points < 1000)
    throw DomainError("brute_force_posterior: n_points must be >= 1000");
  PosteriorConfig cfg;
  cfg.single_stage = true;
  cfg.refine_n = n_points;
  const PosteriorEval ev = posterior_grid(ds, view, z, cfg);
  return {ev.mean_t, ev.var_t};
}

std::vector<ProfileRow> posterior_profile(const Dataset& ds,
                                          const ScheduleView& view,
                                          const std::vector<double>& t_stars,
                                          int samples_per_level,
                                          std::uint64_t seed,
                                          const PosteriorConfig& cfg) {
  std::vector<ProfileRow> rows;
  rows.reserve(t_stars.size() * samples_per_level);
  for (std::size_t ti = 0; ti < t_stars.size(); ++ti) {
    for (int j = 0; j < samples_per_level; ++j) {
      auto idx_eng = rng::engine(seed, kTagProfileIdx, ti, j);
      std::uniform_int_distribution<std::int64_t> pick(0, ds.n - 1);
      const std::int64_t idx = pick(idx_eng);
      const NoisyPoint p = corrupt(ds, idx, t_stars[ti], view,
                                   rng::derive(seed, kTagProfileEps, ti, j));
      const PosteriorEval ev = posterior_grid(ds, view, p.z, cfg);
      rows.push_back({t_stars[ti], j, ev.mean_t, ev.var_t});
    }
  }
  return rows;
}

}  // namespace schedlab
